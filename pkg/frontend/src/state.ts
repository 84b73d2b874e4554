/** Review view state: the open document, its sentences and annotation sets,
 * lease status and dirty flags. Every action applies optimistically, carries
 * an idempotency key, and rolls back on a definitive server rejection; the
 * server's annotation set from the response replaces the optimistic one, so
 * settled local state always equals refetched state. Re-invoking an action
 * while its request is in flight returns the in-flight promise (a double
 * click produces exactly one event). */

import { ApiClient, ApiError } from "./api.js";
import type {
  AnnotationSetDto,
  DocumentSummary,
  EditAction,
  LeaseDto,
  NiKind,
  SentenceDto,
} from "./types.js";

export type Listener = () => void;

export class ReviewStore {
  documents: DocumentSummary[] = [];
  docId: string | null = null;
  sentences: SentenceDto[] = [];
  setsBySentence = new Map<string, AnnotationSetDto[]>();
  lease: LeaseDto | null = null;
  readOnly = false;
  dirty = new Set<string>();
  lastError: ApiError | null = null;

  private api: ApiClient;
  private listeners: Listener[] = [];
  private inFlight = new Map<string, Promise<AnnotationSetDto>>();
  private tempCounter = 0;

  constructor(api: ApiClient) {
    this.api = api;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const l of this.listeners) l();
  }

  // -- loading -------------------------------------------------------------

  async loadDocuments(): Promise<void> {
    this.documents = await this.api.documents();
    this.emit();
  }

  async openDocument(docId: string): Promise<void> {
    this.docId = docId;
    try {
      this.lease = await this.api.acquireLease(docId);
      this.readOnly = false;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.lease = null;
        this.readOnly = true; // leased by someone else: read-only banner
      } else {
        throw error;
      }
    }
    this.sentences = await this.api.sentences(docId);
    this.setsBySentence.clear();
    for (const sentence of this.sentences) {
      this.setsBySentence.set(sentence.id, await this.api.annotationSets(sentence.id));
    }
    this.emit();
  }

  async refetchSentence(sentenceId: string): Promise<void> {
    this.setsBySentence.set(sentenceId, await this.api.annotationSets(sentenceId));
    this.emit();
  }

  findSet(asId: string): AnnotationSetDto | undefined {
    for (const sets of this.setsBySentence.values()) {
      const hit = sets.find((a) => a.id === asId);
      if (hit) return hit;
    }
    return undefined;
  }

  sentenceOf(asId: string): string | undefined {
    return this.findSet(asId)?.sentence_id;
  }

  // -- optimistic editing -----------------------------------------------------

  private replaceLocal(next: AnnotationSetDto): void {
    const sets = this.setsBySentence.get(next.sentence_id) ?? [];
    const index = sets.findIndex((a) => a.id === next.id);
    if (index >= 0) sets[index] = next;
    else sets.push(next);
    this.setsBySentence.set(next.sentence_id, sets);
    this.emit();
  }

  private optimistic(asId: string, change: (as: AnnotationSetDto) => AnnotationSetDto): AnnotationSetDto {
    const current = this.findSet(asId);
    if (!current) throw new Error(`unknown annotation set ${asId}`);
    const snapshot = structuredClone(current);
    this.replaceLocal(change(structuredClone(current)));
    this.dirty.add(asId);
    return snapshot;
  }

  /** One server event per logical action: concurrent re-invocations share the
   * in-flight promise and its idempotency key. */
  private act(
    key: string,
    asId: string,
    action: EditAction,
    change: (as: AnnotationSetDto) => AnnotationSetDto,
  ): Promise<AnnotationSetDto> {
    const pending = this.inFlight.get(key);
    if (pending) return pending;
    const docId = this.docId ?? "";
    const snapshot = this.optimistic(asId, change);
    const idempotencyKey = this.api.newIdempotencyKey();
    const promise = this.api
      .edit(asId, docId, action, idempotencyKey)
      .then((response) => {
        this.replaceLocal(response.annotation_set);
        this.dirty.delete(asId);
        return response.annotation_set;
      })
      .catch((error) => {
        if (error instanceof ApiError && error.status >= 400 && error.status < 500) {
          this.replaceLocal(snapshot); // definitive rejection: roll back
          this.dirty.delete(asId);
          this.lastError = error;
          this.emit();
        }
        throw error;
      })
      .finally(() => {
        this.inFlight.delete(key);
      });
    this.inFlight.set(key, promise);
    return promise;
  }

  accept(asId: string): Promise<AnnotationSetDto> {
    return this.act(`${asId}:accept`, asId, { action: "accept" }, (as) => ({
      ...as,
      status: "accepted",
    }));
  }

  remove(asId: string): Promise<AnnotationSetDto> {
    return this.act(`${asId}:delete`, asId, { action: "delete" }, (as) => ({
      ...as,
      status: "deleted",
    }));
  }

  replaceFrame(asId: string, frame: string): Promise<AnnotationSetDto> {
    return this.act(
      `${asId}:replace_frame:${frame}`,
      asId,
      { action: "replace_frame", payload: { frame } },
      (as) => ({ ...as, status: "updated", fes: [], lu: { ...as.lu, frame } }),
    );
  }

  addFe(asId: string, feName: string, span: { start: number; end: number }): Promise<AnnotationSetDto> {
    return this.act(
      `${asId}:add_fe:${feName}`,
      asId,
      { action: "add_fe", payload: { fe_name: feName, span } },
      (as) => ({
        ...as,
        status: "updated",
        fes: [...as.fes, { name: feName, start: span.start, end: span.end }],
      }),
    );
  }

  removeFe(asId: string, feName: string): Promise<AnnotationSetDto> {
    return this.act(
      `${asId}:remove_fe:${feName}`,
      asId,
      { action: "remove_fe", payload: { fe_name: feName } },
      (as) => ({ ...as, status: "updated", fes: as.fes.filter((fe) => fe.name !== feName) }),
    );
  }

  setNi(asId: string, feName: string, ni: NiKind): Promise<AnnotationSetDto> {
    return this.act(
      `${asId}:set_ni:${feName}:${ni}`,
      asId,
      { action: "set_ni", payload: { fe_name: feName, ni } },
      (as) => ({
        ...as,
        status: "updated",
        fes: [...as.fes.filter((fe) => fe.name !== feName), { name: feName, ni }],
      }),
    );
  }

  createAs(
    sentenceId: string,
    target: { start: number; end: number },
    frame: string,
  ): Promise<AnnotationSetDto> {
    const key = `create:${sentenceId}:${target.start}:${target.end}:${frame}`;
    const pending = this.inFlight.get(key);
    if (pending) return pending;
    const tempId = `tmp-${++this.tempCounter}`;
    const optimistic: AnnotationSetDto = {
      id: tempId,
      sentence_id: sentenceId,
      lu: { lemma: "", pos: "", frame },
      target,
      fes: [],
      status: "created",
      provenance: "human",
      time_spent: 0,
    };
    this.replaceLocal(optimistic);
    const idempotencyKey = this.api.newIdempotencyKey();
    const promise = this.api
      .create(sentenceId, this.docId ?? "", target, frame, idempotencyKey)
      .then((response) => {
        const sets = (this.setsBySentence.get(sentenceId) ?? []).filter((a) => a.id !== tempId);
        sets.push(response.annotation_set);
        this.setsBySentence.set(sentenceId, sets);
        this.emit();
        return response.annotation_set;
      })
      .catch((error) => {
        if (error instanceof ApiError && error.status >= 400 && error.status < 500) {
          this.setsBySentence.set(
            sentenceId,
            (this.setsBySentence.get(sentenceId) ?? []).filter((a) => a.id !== tempId),
          );
          this.lastError = error;
          this.emit();
        }
        throw error;
      })
      .finally(() => {
        this.inFlight.delete(key);
      });
    this.inFlight.set(key, promise);
    return promise;
  }
}
