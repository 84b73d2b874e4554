/** DOM rendering for the review loop: sentence tokens with target and FE
 * highlighting, one panel per annotation set with a status badge, FE chips
 * (span-colored, or an INI/DNI/CNI chip for null instantiations), and the
 * edit controls. Deleted sets collapse to a struck-through header. */

import type { AnnotationSetDto, FrameDetail, FrameSearchHit, SentenceDto, TokenDto } from "./types.js";
import { isNi } from "./types.js";

export interface PanelHandlers {
  onAccept: (asId: string) => void;
  onDelete: (asId: string) => void;
  onReplaceFrame: (asId: string, frame: string) => void;
  onAddFe: (asId: string, feName: string, span: { start: number; end: number }) => void;
  onRemoveFe: (asId: string, feName: string) => void;
  onSetNi: (asId: string, feName: string, ni: "INI" | "DNI" | "CNI") => void;
  onFocusAs: (asId: string) => void;
  searchFrames: (query: string, lemma: string) => Promise<FrameSearchHit[]>;
  frameInfo: (frame: string) => Promise<FrameDetail>;
}

const FE_COLORS = ["fe-c0", "fe-c1", "fe-c2", "fe-c3", "fe-c4", "fe-c5", "fe-c6", "fe-c7"];

export function feColorClass(index: number): string {
  return FE_COLORS[index % FE_COLORS.length]!;
}

/** Token strip with data-token offsets; returns the selectable elements. */
export function renderTokens(sentence: SentenceDto, selection: TokenSelection): HTMLElement {
  const strip = document.createElement("div");
  strip.className = "token-strip";
  strip.dataset.sentenceId = sentence.id;
  for (const token of sentence.tokens) {
    const el = document.createElement("span");
    el.className = "token";
    el.textContent = token.form;
    el.dataset.index = String(token.index);
    el.dataset.start = String(token.start);
    el.dataset.end = String(token.end);
    el.addEventListener("mousedown", () => selection.begin(token));
    el.addEventListener("mouseenter", (event) => {
      if ((event as MouseEvent).buttons === 1) selection.extend(token);
    });
    el.addEventListener("mouseup", () => selection.end(token));
    el.addEventListener("click", () => selection.clickToggle(token, el));
    strip.appendChild(el);
    strip.appendChild(document.createTextNode(" "));
  }
  return strip;
}

/** Token-snapped span selection: click or drag across tokens. */
export class TokenSelection {
  private anchor: TokenDto | null = null;
  private head: TokenDto | null = null;
  onChange: (span: { start: number; end: number } | null) => void = () => {};

  begin(token: TokenDto): void {
    this.anchor = token;
    this.head = token;
    this.onChange(this.current());
  }

  extend(token: TokenDto): void {
    if (!this.anchor) return;
    this.head = token;
    this.onChange(this.current());
  }

  end(token: TokenDto): void {
    if (!this.anchor) return;
    this.head = token;
    this.onChange(this.current());
  }

  clickToggle(token: TokenDto, el: HTMLElement): void {
    el.classList.toggle("selected");
  }

  clear(): void {
    this.anchor = null;
    this.head = null;
    this.onChange(null);
  }

  current(): { start: number; end: number } | null {
    if (!this.anchor || !this.head) return null;
    return {
      start: Math.min(this.anchor.start, this.head.start),
      end: Math.max(this.anchor.end, this.head.end),
    };
  }
}

export function highlightSpans(strip: HTMLElement, as: AnnotationSetDto): void {
  const tokens = strip.querySelectorAll<HTMLElement>(".token");
  tokens.forEach((el) => {
    el.classList.remove("target", ...FE_COLORS);
    const start = Number(el.dataset.start);
    const end = Number(el.dataset.end);
    if (start < as.target.end && as.target.start < end) el.classList.add("target");
    as.fes.forEach((fe, i) => {
      if (!isNi(fe) && start < fe.end && fe.start < end) el.classList.add(feColorClass(i));
    });
  });
}

export function statusBadge(status: AnnotationSetDto["status"]): HTMLElement {
  const badge = document.createElement("span");
  badge.className = `badge badge-${status}`;
  badge.textContent = status.toUpperCase();
  return badge;
}

export function renderPanel(
  as: AnnotationSetDto,
  handlers: PanelHandlers,
  readOnly: boolean,
): HTMLElement {
  const panel = document.createElement("section");
  panel.className = `as-panel status-${as.status}`;
  panel.dataset.asId = as.id;
  panel.tabIndex = 0;
  panel.addEventListener("focusin", () => handlers.onFocusAs(as.id));
  panel.addEventListener("mousedown", () => handlers.onFocusAs(as.id));

  const header = document.createElement("header");
  const title = document.createElement("span");
  title.className = "as-title";
  title.textContent = `${as.lu.lemma}.${as.lu.pos} → ${as.lu.frame}`;
  header.appendChild(title);
  header.appendChild(statusBadge(as.status));
  const time = document.createElement("span");
  time.className = "as-time";
  time.textContent = `${as.time_spent.toFixed(0)}s`;
  header.appendChild(time);
  panel.appendChild(header);

  if (as.status === "deleted") {
    panel.classList.add("deleted"); // collapsed, struck-through
    return panel;
  }

  const feList = document.createElement("ul");
  feList.className = "fe-list";
  // unfilled core-FE slots and the frame's minimal requirement, async
  void handlers.frameInfo(as.lu.frame).then((frame) => {
    const realized = new Set(as.fes.map((fe) => fe.name));
    for (const fe of frame.fes) {
      if (fe.coreness !== "core" || realized.has(fe.name)) continue;
      const slot = document.createElement("li");
      slot.className = "fe-chip fe-slot";
      slot.textContent = fe.name;
      slot.title = "core FE, not yet annotated";
      feList.appendChild(slot);
    }
    const hint = document.createElement("span");
    hint.className = "core-hint";
    hint.textContent = `min ${frame.minimal_core.count} core`;
    header.appendChild(hint);
  });
  as.fes.forEach((fe, i) => {
    const item = document.createElement("li");
    item.className = `fe-chip ${isNi(fe) ? "fe-ni" : feColorClass(i)}`;
    item.textContent = isNi(fe) ? `${fe.name}: ${fe.ni}` : fe.name;
    if (!readOnly) {
      const removeButton = document.createElement("button");
      removeButton.className = "fe-remove";
      removeButton.textContent = "×";
      removeButton.addEventListener("click", () => handlers.onRemoveFe(as.id, fe.name));
      item.appendChild(removeButton);
    }
    feList.appendChild(item);
  });
  panel.appendChild(feList);

  if (readOnly) return panel;

  const controls = document.createElement("div");
  controls.className = "controls";

  const acceptButton = document.createElement("button");
  acceptButton.className = "accept";
  acceptButton.textContent = "Accept";
  acceptButton.disabled = as.status !== "machine_pending";
  acceptButton.addEventListener("click", () => handlers.onAccept(as.id));
  controls.appendChild(acceptButton);

  const deleteButton = document.createElement("button");
  deleteButton.className = "delete";
  deleteButton.textContent = "Delete";
  deleteButton.addEventListener("click", () => handlers.onDelete(as.id));
  controls.appendChild(deleteButton);

  controls.appendChild(
    frameSearchBox(as.lu.lemma, handlers.searchFrames, (frame) =>
      handlers.onReplaceFrame(as.id, frame),
    ),
  );
  controls.appendChild(fePicker(as, handlers));
  panel.appendChild(controls);

  const errorSlot = document.createElement("p");
  errorSlot.className = "panel-error";
  errorSlot.hidden = true;
  panel.appendChild(errorSlot);
  return panel;
}

/** Frame autocomplete: lemma-evoked frames rank first (server-side). */
export function frameSearchBox(
  lemma: string,
  search: PanelHandlers["searchFrames"],
  onPick: (frame: string) => void,
): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "frame-search";
  const input = document.createElement("input");
  input.type = "search";
  input.placeholder = "replace frame…";
  const list = document.createElement("ul");
  list.className = "frame-hits";
  list.hidden = true;
  let debounce: ReturnType<typeof setTimeout> | undefined;
  input.addEventListener("input", () => {
    clearTimeout(debounce);
    debounce = setTimeout(async () => {
      if (!input.value) {
        list.hidden = true;
        return;
      }
      const hits = await search(input.value, lemma);
      list.replaceChildren(
        ...hits.map((hit) => {
          const item = document.createElement("li");
          item.textContent = hit.lu_match ? `${hit.name} ★` : hit.name;
          item.addEventListener("click", () => {
            onPick(hit.name);
            input.value = "";
            list.hidden = true;
          });
          return item;
        }),
      );
      list.hidden = hits.length === 0;
    }, 150);
  });
  wrap.appendChild(input);
  wrap.appendChild(list);
  return wrap;
}

/** FE adder: only the frame's own FEs are offered, so an out-of-frame FE is
 * impossible by construction. The span comes from the current token
 * selection; without one the FE is recorded as a null instantiation. */
function fePicker(as: AnnotationSetDto, handlers: PanelHandlers): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "fe-picker";
  const select = document.createElement("select");
  select.appendChild(new Option("add FE…", ""));
  void handlers.frameInfo(as.lu.frame).then((frame) => {
    for (const fe of frame.fes) {
      if (!as.fes.some((r) => r.name === fe.name)) select.appendChild(new Option(fe.name, fe.name));
    }
  });
  const spanButton = document.createElement("button");
  spanButton.className = "fe-add-span";
  spanButton.textContent = "FE on selection";
  spanButton.addEventListener("click", () => {
    if (select.value) handlers.onAddFe(as.id, select.value, currentSelectionSpan());
  });
  const niSelect = document.createElement("select");
  niSelect.className = "fe-add-ni";
  for (const kind of ["", "INI", "DNI", "CNI"]) {
    niSelect.appendChild(new Option(kind || "as NI…", kind));
  }
  niSelect.addEventListener("change", () => {
    if (select.value && niSelect.value) {
      handlers.onSetNi(as.id, select.value, niSelect.value as "INI" | "DNI" | "CNI");
      niSelect.value = "";
    }
  });
  wrap.appendChild(select);
  wrap.appendChild(spanButton);
  wrap.appendChild(niSelect);
  return wrap;
}

let activeSelection: { start: number; end: number } | null = null;

export function setActiveSelection(span: { start: number; end: number } | null): void {
  activeSelection = span;
}

function currentSelectionSpan(): { start: number; end: number } {
  if (!activeSelection) throw new Error("select tokens first");
  return activeSelection;
}

export function renderSentence(
  sentence: SentenceDto,
  sets: AnnotationSetDto[],
  handlers: PanelHandlers,
  readOnly: boolean,
): HTMLElement {
  const container = document.createElement("article");
  container.className = "sentence";
  const selection = new TokenSelection();
  selection.onChange = setActiveSelection;
  container.appendChild(renderTokens(sentence, selection));
  const panels = document.createElement("div");
  panels.className = "panels";
  for (const as of sets) {
    panels.appendChild(renderPanel(as, handlers, readOnly));
  }
  container.appendChild(panels);
  return container;
}
