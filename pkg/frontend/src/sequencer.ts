/** Request pacing: debounce for slider-driven calls plus stale-response
 * discarding so at most one in-flight result per endpoint kind wins.
 */

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), delayMs);
  };
}

/** Tags each task per kind; resolves null for results superseded by a
 * newer request of the same kind. */
export class LatestOnly {
  private readonly sequence = new Map<string, number>();

  async run<T>(kind: string, task: () => Promise<T>): Promise<T | null> {
    const ticket = (this.sequence.get(kind) ?? 0) + 1;
    this.sequence.set(kind, ticket);
    const result = await task();
    return this.sequence.get(kind) === ticket ? result : null;
  }
}
