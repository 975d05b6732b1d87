/** DOM-free orchestration between view state and the planning service.
 *
 * The controller never recomputes optimization results client-side: the
 * displayed scores, flags, and compositions are always the latest service
 * payloads. Stale responses are discarded via per-endpoint sequencing.
 */

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import { highlightIndex, matchSolution } from "./geometry.js";
import { LatestOnly } from "./sequencer.js";
import type { ExplorerState, LockMode } from "./state.js";
import { encodeState, toggleLock } from "./state.js";
import type { FrontResponse, Solution, StoreInfo } from "./types.js";

export interface ViewModel {
  state: ExplorerState;
  stores: StoreInfo[];
  front: FrontResponse | null;
  /** Index into front.solutions the slider currently points at; -1 if none. */
  highlighted: number;
  /** Latest single-solve response for the slider position. */
  current: Solution | null;
  notice: string | null;
}

export class ExplorerController {
  private readonly client: ApiClient;
  private readonly latest = new LatestOnly();
  private readonly listeners: Array<(vm: ViewModel) => void> = [];

  private state: ExplorerState;
  private stores: StoreInfo[] = [];
  private front: FrontResponse | null = null;
  private current: Solution | null = null;
  private notice: string | null = null;

  constructor(client: ApiClient, initialState: ExplorerState) {
    this.client = client;
    this.state = initialState;
  }

  onChange(listener: (vm: ViewModel) => void): void {
    this.listeners.push(listener);
  }

  viewModel(): ViewModel {
    let highlighted = -1;
    if (this.front && this.front.solutions.length) {
      highlighted =
        this.current !== null ? matchSolution(this.front.solutions, this.current) : -1;
      if (highlighted < 0) {
        highlighted = highlightIndex(this.front.solutions, this.state.lambda);
      }
    }
    return {
      state: this.state,
      stores: this.stores,
      front: this.front,
      highlighted,
      current: this.current,
      notice: this.notice,
    };
  }

  queryString(): string {
    return encodeState(this.state);
  }

  private emit(): void {
    const vm = this.viewModel();
    for (const listener of this.listeners) listener(vm);
  }

  private fail(error: unknown): void {
    this.notice = error instanceof ApiError ? `${error.kind}: ${error.message}` : String(error);
    this.emit();
  }

  async start(): Promise<void> {
    this.stores = await this.client.stores();
    if (this.state.store === null && this.stores.length) {
      this.state = { ...this.state, store: this.stores[0]!.id };
    }
    await this.refreshFront();
    await this.refreshCurrent();
  }

  async selectStore(storeId: string): Promise<void> {
    this.state = { ...this.state, store: storeId, selectedPoint: null };
    await this.refreshFront();
    await this.refreshCurrent();
  }

  async setK(k: number): Promise<void> {
    if (!Number.isInteger(k) || k < 1) return;
    if (this.state.lockedIn.length > k) {
      this.notice = `k=${k} is below the ${this.state.lockedIn.length} locked-in products`;
      this.emit();
      return;
    }
    this.state = { ...this.state, k, selectedPoint: null };
    await this.refreshFront();
    await this.refreshCurrent();
  }

  /** Slider move: one single-solve request; the matching front point is
   * highlighted when the set already lies on the fetched front. */
  async setLambda(lambda: number): Promise<void> {
    this.state = { ...this.state, lambda };
    await this.refreshCurrent();
  }

  async toggleProductLock(productId: string, mode: LockMode): Promise<void> {
    const result = toggleLock(this.state, productId, mode);
    if (!result.changed) {
      this.notice = result.reason ?? "lock rejected";
      this.emit();
      return;
    }
    this.state = result.state;
    await this.refreshFront();
    await this.refreshCurrent();
  }

  selectPoint(index: number): void {
    if (!this.front || index < 0 || index >= this.front.solutions.length) return;
    const solution = this.front.solutions[index]!;
    this.state = { ...this.state, selectedPoint: index, lambda: solution.trade_off_lambda };
    this.current = solution;
    this.emit();
  }

  async refreshFront(): Promise<void> {
    if (this.state.store === null) return;
    this.notice = null;
    try {
      const response = await this.latest.run("pareto", () =>
        this.client.pareto({
          store: this.state.store!,
          k: this.state.k,
          lambda_grid: 21,
          locked_in: this.state.lockedIn,
          locked_out: this.state.lockedOut,
        }),
      );
      if (response === null) return; // superseded
      this.front = response;
      this.emit();
    } catch (error) {
      this.fail(error);
    }
  }

  async refreshCurrent(): Promise<void> {
    if (this.state.store === null) return;
    try {
      const response = await this.latest.run("optimize", () =>
        this.client.optimize({
          store: this.state.store!,
          k: this.state.k,
          trade_off_lambda: this.state.lambda,
          locked_in: this.state.lockedIn,
          locked_out: this.state.lockedOut,
        }),
      );
      if (response === null) return;
      this.current = response;
      this.notice = null;
      this.emit();
    } catch (error) {
      this.fail(error);
    }
  }
}
