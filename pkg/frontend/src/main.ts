/**
 * Application shell: owns the state, re-renders on every event, talks to
 * the service, and binds the keyboard. Connectivity problems never reset
 * the state, so drafts survive a flaky network; an expired claim or a
 * version conflict triggers a refresh of the current candidate instead.
 */

import { ApiClient, ApiError } from "./api.js";
import { keyToAction } from "./keyboard.js";
import {
  type AnnotationState,
  INITIAL_STATE,
  type UiEvent,
  editSubmission,
  reduce,
  submission,
} from "./state.js";
import { render } from "./view.js";

export interface AppOptions {
  baseUrl: string;
  batchId: string;
  annotator: string;
  token?: string;
}

export class App {
  private state: AnnotationState = INITIAL_STATE;
  private client: ApiClient;
  private options: AppOptions;
  private mount: HTMLElement;

  constructor(mount: HTMLElement, options: AppOptions) {
    this.mount = mount;
    this.options = options;
    this.client = new ApiClient(options.baseUrl, { token: options.token });
  }

  start(): void {
    document.addEventListener("keydown", (event) => {
      const target = event.target as HTMLElement | null;
      if (target !== null && target.tagName === "TEXTAREA") {
        return;
      }
      const action = keyToAction(event.key, this.state);
      if (action === null) {
        return;
      }
      event.preventDefault();
      if (action.kind === "dispatch") {
        this.dispatch(action.event);
      } else if (action.kind === "submit") {
        void this.submit();
      } else {
        void this.applyEdit();
      }
    });
    void this.fetchNext();
  }

  dispatch(event: UiEvent): void {
    this.state = reduce(this.state, event);
    this.paint();
  }

  private paint(): void {
    this.mount.replaceChildren(
      render(this.state, {
        dispatch: (event) => this.dispatch(event),
        submit: () => void this.submit(),
        applyEdit: () => void this.applyEdit(),
      }),
    );
  }

  async fetchNext(): Promise<void> {
    try {
      const claimed = await this.client.nextCandidate(
        this.options.batchId,
        this.options.annotator,
      );
      if (claimed === null) {
        this.dispatch({ kind: "queueDrained" });
      } else {
        this.dispatch({ kind: "candidate", claimed });
      }
    } catch (err) {
      this.reportError(err);
    }
  }

  async submit(): Promise<void> {
    const body = submission(this.state, this.options.annotator);
    if (body === null) {
      return;
    }
    try {
      await this.client.submitAnnotation(body);
      await this.fetchNext();
    } catch (err) {
      if (err instanceof ApiError && isStaleClaim(err)) {
        // Someone else finished the pair or the lease ran out: pick up
        // a fresh candidate rather than fighting over this one.
        await this.fetchNext();
        return;
      }
      this.reportError(err);
    }
  }

  async applyEdit(): Promise<void> {
    const edit = editSubmission(this.state);
    if (edit === null || this.state.pair === null) {
      return;
    }
    const body = {
      annotator: this.options.annotator,
      ...(edit.side === 1 ? { new_text1: edit.text } : { new_text2: edit.text }),
    };
    try {
      const result = await this.client.editPair(this.state.pair.id, body);
      this.dispatch({
        kind: "pairEdited",
        pair: result.pair,
        directive: result.directive,
        lints: result.lints,
      });
    } catch (err) {
      if (err instanceof ApiError && isStaleClaim(err)) {
        await this.fetchNext();
        return;
      }
      this.reportError(err);
    }
  }

  private reportError(err: unknown): void {
    if (err instanceof ApiError) {
      this.dispatch({
        kind: "serviceRejected",
        code: err.code,
        detail: err.detail,
        violations: err.violations,
      });
    } else {
      this.dispatch({
        kind: "serviceRejected",
        code: "ClientError",
        detail: String(err),
        violations: [],
      });
    }
  }

  snapshot(): AnnotationState {
    return this.state;
  }
}

function isStaleClaim(err: ApiError): boolean {
  return err.code === "ExpiredClaim" || err.code === "VersionConflict";
}

export function boot(): void {
  const mount = document.querySelector("#app");
  if (mount === null) {
    return;
  }
  const params = new URLSearchParams(window.location.search);
  const app = new App(mount as HTMLElement, {
    baseUrl: params.get("service") ?? "http://127.0.0.1:8765",
    batchId: params.get("batch") ?? "default",
    annotator: params.get("annotator") ?? "anon",
    token: params.get("token") ?? undefined,
  });
  app.start();
}

if (typeof document !== "undefined" && document.querySelector("#app") !== null) {
  boot();
}
