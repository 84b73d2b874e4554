/** App bootstrap: document list, review view, lease polling and idle-aware
 * per-AS timing. Served by `fw serve --webui-dir frontend/dist`. */

import { ApiClient, ApiError } from "./api.js";
import { renderSentence } from "./render.js";
import { ReviewStore } from "./state.js";
import { ReviewTimer } from "./timer.js";

const LEASE_POLL_MS = 20_000;
const IDLE_TICK_MS = 5_000;

function qs<T extends HTMLElement>(selector: string): T {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
}

function start(): void {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient({
    baseUrl: "",
    authToken: params.get("token") ?? undefined,
    annotator: params.get("annotator") ?? undefined,
  });
  const store = new ReviewStore(api);
  const timer = new ReviewTimer({
    sink: (asId, action, ts) => {
      const docId = store.docId ?? "";
      void api.timer(asId, docId, action, ts).catch(() => {
        /* queued and retried by the client; never silently dropped */
      });
    },
  });

  const docList = qs<HTMLUListElement>("#documents");
  const view = qs<HTMLDivElement>("#review");
  const banner = qs<HTMLDivElement>("#banner");

  const handlers = {
    onAccept: (id: string) => void store.accept(id).catch(showError),
    onDelete: (id: string) => void store.remove(id).catch(showError),
    onReplaceFrame: (id: string, frame: string) =>
      void store.replaceFrame(id, frame).catch(showError),
    onAddFe: (id: string, fe: string, span: { start: number; end: number }) =>
      void store.addFe(id, fe, span).catch(showError),
    onRemoveFe: (id: string, fe: string) => void store.removeFe(id, fe).catch(showError),
    onSetNi: (id: string, fe: string, ni: "INI" | "DNI" | "CNI") =>
      void store.setNi(id, fe, ni).catch(showError),
    onFocusAs: (id: string) => timer.focus(id),
    searchFrames: (query: string, lemma: string) => api.searchFrames(query, lemma),
    frameInfo: (frame: string) => api.frameDetail(frame),
  };

  function showError(error: unknown): void {
    banner.hidden = false;
    banner.className = "banner error";
    banner.textContent =
      error instanceof ApiError ? `${error.code}: ${error.detail}` : String(error);
    setTimeout(() => (banner.hidden = true), 4000);
  }

  function renderDocuments(): void {
    docList.replaceChildren(
      ...store.documents.map((doc) => {
        const item = document.createElement("li");
        const counts = Object.entries(doc.as_counts)
          .map(([label, n]) => `${label}: ${n}`)
          .join(", ");
        item.textContent = `${doc.id} - ${doc.title} (${counts})`;
        item.addEventListener("click", () => void openDoc(doc.id));
        return item;
      }),
    );
  }

  function renderReview(): void {
    view.replaceChildren(
      ...store.sentences.map((sentence) =>
        renderSentence(
          sentence,
          store.setsBySentence.get(sentence.id) ?? [],
          handlers,
          store.readOnly,
        ),
      ),
    );
    banner.hidden = !store.readOnly;
    if (store.readOnly) {
      banner.className = "banner readonly";
      banner.textContent = "Document is leased to another annotator - read only.";
    }
  }

  async function openDoc(docId: string): Promise<void> {
    timer.stop();
    await store.openDocument(docId);
    renderReview();
  }

  store.subscribe(renderReview);
  void store.loadDocuments().then(renderDocuments).catch(showError);

  document.addEventListener("keydown", () => timer.activity());
  document.addEventListener("mousemove", () => timer.activity());
  window.addEventListener("blur", () => timer.stop());
  setInterval(() => timer.tick(), IDLE_TICK_MS);
  setInterval(() => {
    // lease renewal on activity; expiry flips the view to read-only
    if (store.docId && !store.readOnly) {
      api.acquireLease(store.docId).catch(() => {
        store.readOnly = true;
        renderReview();
      });
    }
  }, LEASE_POLL_MS);
}

document.addEventListener("DOMContentLoaded", start);
