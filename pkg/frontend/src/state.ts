/** Explorer view state, reconstructible from the URL query string.
 *
 * The service owns all optimization math; this state only records what the
 * merchandiser is looking at: store, assortment size, trade-off slider,
 * locks, and which front point is selected.
 */

export interface ExplorerState {
  store: string | null;
  k: number;
  lambda: number;
  lockedIn: string[];
  lockedOut: string[];
  selectedPoint: number | null;
}

export const DEFAULT_STATE: ExplorerState = {
  store: null,
  k: 10,
  lambda: 0.5,
  lockedIn: [],
  lockedOut: [],
  selectedPoint: null,
};

function normalizeIds(ids: Iterable<string>): string[] {
  return [...new Set([...ids].filter((id) => id.length > 0))].sort();
}

export function encodeState(state: ExplorerState): string {
  const params = new URLSearchParams();
  if (state.store !== null) params.set("store", state.store);
  params.set("k", String(state.k));
  params.set("lambda", String(state.lambda));
  if (state.lockedIn.length) params.set("in", normalizeIds(state.lockedIn).join(","));
  if (state.lockedOut.length) params.set("out", normalizeIds(state.lockedOut).join(","));
  if (state.selectedPoint !== null) params.set("point", String(state.selectedPoint));
  return params.toString();
}

export function decodeState(query: string): ExplorerState {
  const params = new URLSearchParams(query);
  const rawK = params.get("k");
  const rawLambda = params.get("lambda");
  const point = params.get("point");
  const k = rawK === null ? NaN : Number(rawK);
  const lambda = rawLambda === null ? NaN : Number(rawLambda);
  return {
    store: params.get("store"),
    k: Number.isInteger(k) && k >= 1 ? k : DEFAULT_STATE.k,
    lambda: Number.isFinite(lambda) && lambda >= 0 && lambda <= 1 ? lambda : DEFAULT_STATE.lambda,
    lockedIn: normalizeIds((params.get("in") ?? "").split(",")),
    lockedOut: normalizeIds((params.get("out") ?? "").split(",")),
    selectedPoint: point !== null && Number.isInteger(Number(point)) ? Number(point) : null,
  };
}

export type LockMode = "in" | "out";

export interface LockResult {
  state: ExplorerState;
  changed: boolean;
  reason?: string;
}

/** Toggle a product lock; re-toggling the same mode clears it, switching
 * modes moves it. Never produces overlapping locks or more than k
 * locked-in products. */
export function toggleLock(state: ExplorerState, productId: string, mode: LockMode): LockResult {
  const lockedIn = new Set(state.lockedIn);
  const lockedOut = new Set(state.lockedOut);
  const target = mode === "in" ? lockedIn : lockedOut;
  const other = mode === "in" ? lockedOut : lockedIn;

  if (target.has(productId)) {
    target.delete(productId);
  } else {
    if (mode === "in" && lockedIn.size >= state.k) {
      return {
        state,
        changed: false,
        reason: `cannot lock in more than k=${state.k} products`,
      };
    }
    other.delete(productId);
    target.add(productId);
  }
  return {
    state: {
      ...state,
      lockedIn: normalizeIds(lockedIn),
      lockedOut: normalizeIds(lockedOut),
      selectedPoint: null,
    },
    changed: true,
  };
}

export function statesEqual(a: ExplorerState, b: ExplorerState): boolean {
  return encodeState(a) === encodeState(b);
}
