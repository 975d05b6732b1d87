/** Fetch stub that answers like the planning service, backed by captured
 * response fixtures. POST /optimize derives its answer from the matching
 * front fixture (the entry active at the requested lambda), which is
 * exactly how the live service's sweep relates to its single solves.
 */

import type { FrontResponse, FrontSolution, Solution } from "../src/types.js";
import storesFixture from "./fixtures/stores.json" with { type: "json" };
import productsFixture from "./fixtures/products_s00.json" with { type: "json" };
import histogramsFixture from "./fixtures/histograms.json" with { type: "json" };
import plainFront from "./fixtures/pareto_s00_k5.json" with { type: "json" };
import lockedFront from "./fixtures/pareto_s00_k5_locked.json" with { type: "json" };

export const LOCKED_PRODUCT = "p0056";

function json(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function activeSolution(front: FrontResponse, lambda: number): FrontSolution {
  let active = front.solutions[0]!;
  for (const solution of front.solutions) {
    if (solution.trade_off_lambda <= lambda) active = solution;
  }
  return active;
}

function toSolution(entry: FrontSolution, lambda: number): Solution {
  const { non_dominated: _flag, fabric_composition: _comp, ...solution } = entry;
  return { ...solution, trade_off_lambda: lambda };
}

export interface StubLog {
  optimizeCalls: Array<{ lambda: number; lockedIn: string[] }>;
  paretoCalls: Array<{ lockedIn: string[] }>;
}

export function makeStubFetch(log: StubLog) {
  return async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input, "http://stub");
    const path = url.pathname;

    if (path === "/stores") return json(storesFixture);
    if (path === "/products") return json(productsFixture);
    if (path === "/histograms") return json(histogramsFixture);

    const body = init?.body ? JSON.parse(String(init.body)) : {};
    const lockedIn: string[] = body.locked_in ?? [];
    const lockedOut: string[] = body.locked_out ?? [];

    if (lockedIn.some((pid: string) => lockedOut.includes(pid))) {
      return json(
        { kind: "InvalidLocks", message: "products locked both in and out" },
        400,
      );
    }
    const front = (lockedIn.length ? lockedFront : plainFront) as FrontResponse;

    if (path === "/pareto") {
      log.paretoCalls.push({ lockedIn });
      return json(front);
    }
    if (path === "/optimize") {
      const lambda: number = body.trade_off_lambda;
      log.optimizeCalls.push({ lambda, lockedIn });
      return json(toSolution(activeSolution(front, lambda), lambda));
    }
    return json({ kind: "Error", message: `unstubbed path ${path}` }, 404);
  };
}
