import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReviewStore } from "../src/state.js";
import type { AnnotationSetDto } from "../src/types.js";

const baseAs: AnnotationSetDto = {
  id: "a1",
  sentence_id: "s1",
  lu: { lemma: "correr", pos: "VERB", frame: "Self_motion" },
  target: { start: 5, end: 10 },
  fes: [{ name: "Self_mover", start: 0, end: 4 }],
  status: "machine_pending",
  provenance: "machine",
  time_spent: 0,
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), { status });
}

interface Script {
  onPatch: (body: any) => Response | Promise<Response>;
}

function storeWith(script: Script) {
  let patches = 0;
  const client = new ApiClient({
    baseUrl: "http://x",
    retryDelayMs: 1,
    fetchFn: async (url, init) => {
      const u = String(url);
      if (init?.method === "PATCH") {
        patches += 1;
        return script.onPatch(JSON.parse(String(init.body)));
      }
      if (u.includes("/annotation-sets?") || u.endsWith("condition=machine_human")) {
        return jsonResponse({ annotation_sets: [baseAs] });
      }
      throw new Error(`unexpected ${u}`);
    },
  });
  const store = new ReviewStore(client);
  store.docId = "d1";
  store.setsBySentence.set("s1", [structuredClone(baseAs)]);
  return { store, patchCount: () => patches };
}

describe("ReviewStore optimistic editing", () => {
  it("applies optimistically and settles on the server annotation set", async () => {
    let resolveResponse!: (r: Response) => void;
    const gate = new Promise<Response>((r) => (resolveResponse = r));
    const { store } = storeWith({ onPatch: () => gate });
    const promise = store.accept("a1");
    expect(store.findSet("a1")!.status).toBe("accepted"); // optimistic, pre-response
    expect(store.dirty.has("a1")).toBe(true);
    resolveResponse(
      jsonResponse({
        seq: 1,
        deduplicated: false,
        annotation_set: { ...baseAs, status: "accepted" },
      }),
    );
    await promise;
    expect(store.findSet("a1")!.status).toBe("accepted");
    expect(store.dirty.has("a1")).toBe(false);
  });

  it("rolls back on a 4xx rejection", async () => {
    const { store } = storeWith({
      onPatch: () =>
        jsonResponse({ detail: { code: "ACCEPT_AFTER_MODIFY", detail: "already modified" } }, 409),
    });
    await expect(store.accept("a1")).rejects.toMatchObject({ code: "ACCEPT_AFTER_MODIFY" });
    expect(store.findSet("a1")!.status).toBe("machine_pending"); // rolled back
    expect(store.lastError?.code).toBe("ACCEPT_AFTER_MODIFY");
  });

  it("a double click shares one request and one idempotency key", async () => {
    const keys: string[] = [];
    const { store, patchCount } = storeWith({
      onPatch: (body) => {
        keys.push(body.idempotency_key);
        return jsonResponse({
          seq: 1,
          deduplicated: false,
          annotation_set: { ...baseAs, status: "accepted" },
        });
      },
    });
    const [first, second] = [store.accept("a1"), store.accept("a1")];
    expect(second).toBe(first); // same in-flight promise
    await Promise.all([first, second]);
    expect(patchCount()).toBe(1);
    expect(new Set(keys).size).toBe(1);
  });

  it("replace_frame clears the FE list optimistically", async () => {
    const { store } = storeWith({
      onPatch: (body) =>
        jsonResponse({
          seq: 1,
          deduplicated: false,
          annotation_set: {
            ...baseAs,
            status: "updated",
            fes: [],
            lu: { ...baseAs.lu, frame: body.payload.frame },
          },
        }),
    });
    const settled = await store.replaceFrame("a1", "Motion");
    expect(settled.fes).toEqual([]);
    expect(store.findSet("a1")!.lu.frame).toBe("Motion");
  });
});
