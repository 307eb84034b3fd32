/** Review-queue flow: list unverified detections, submit verdicts, advance.
 *
 * Submission is optimistic: the item leaves the queue immediately and
 * comes back (with the error surfaced) if the API refuses it. Keyboard
 * driven; accepting the model's own class is a single key.
 */

import { Api, ApiError, OfflineError } from "./api.js";
import type { Detection, VerifyBody } from "./types.js";

export type VerdictAction =
  | { kind: "accept" }
  | { kind: "species"; classId: number }
  | { kind: "blank" }
  | { kind: "no_good" };

export function verdictBody(
  detection: Detection,
  action: VerdictAction,
  reviewer: string,
): VerifyBody {
  switch (action.kind) {
    case "accept":
      return { true_class_id: detection.class_id, reviewer };
    case "species":
      return { true_class_id: action.classId, reviewer };
    case "blank":
      return { sentinel: "BLANK", reviewer };
    case "no_good":
      return { sentinel: "NO_GOOD", reviewer };
  }
}

export const KEY_BINDINGS: Record<string, VerdictAction | "next" | "prev"> = {
  a: { kind: "accept" },
  Enter: { kind: "accept" },
  b: { kind: "blank" },
  g: { kind: "no_good" },
  ArrowRight: "next",
  ArrowLeft: "prev",
};

export interface ReviewState {
  queue: Detection[];
  index: number;
  submitting: boolean;
  lastError: string | null;
  reviewedCount: number;
}

export class ReviewFlow {
  state: ReviewState = {
    queue: [],
    index: 0,
    submitting: false,
    lastError: null,
    reviewedCount: 0,
  };

  constructor(
    private readonly api: Api,
    private readonly onChange: (state: ReviewState) => void = () => {},
  ) {}

  get current(): Detection | null {
    return this.state.queue[this.state.index] ?? null;
  }

  private emit(): void {
    this.onChange(this.state);
  }

  async refresh(): Promise<void> {
    const page = await this.api.detections({ verified: false, limit: 50 });
    this.state = { ...this.state, queue: page.items, index: 0 };
    this.emit();
  }

  move(step: 1 | -1): void {
    const max = this.state.queue.length - 1;
    const index = Math.min(Math.max(this.state.index + step, 0), Math.max(max, 0));
    this.state = { ...this.state, index };
    this.emit();
  }

  async submit(action: VerdictAction): Promise<boolean> {
    const detection = this.current;
    if (detection === null || this.state.submitting) return false;
    const body = verdictBody(detection, action, this.api.reviewer);

    // optimistic: drop the item now, restore on failure
    const queue = this.state.queue.filter((d) => d !== detection);
    const index = Math.min(this.state.index, Math.max(queue.length - 1, 0));
    this.state = { ...this.state, queue, index, submitting: true, lastError: null };
    this.emit();

    try {
      await this.api.verify(detection.detection_id, body);
      this.state = {
        ...this.state,
        submitting: false,
        reviewedCount: this.state.reviewedCount + 1,
      };
      this.emit();
      return true;
    } catch (err) {
      const restored = [...this.state.queue];
      restored.splice(Math.min(this.state.index, restored.length), 0, detection);
      const message =
        err instanceof ApiError
          ? `${err.code}: ${err.message}`
          : err instanceof OfflineError
            ? "API unreachable"
            : String(err);
      this.state = {
        ...this.state,
        queue: restored,
        index: restored.indexOf(detection),
        submitting: false,
        lastError: message,
      };
      this.emit();
      return false;
    }
  }

  handleKey(key: string): Promise<boolean> | void {
    const binding = KEY_BINDINGS[key];
    if (binding === undefined) return;
    if (binding === "next") return void this.move(1);
    if (binding === "prev") return void this.move(-1);
    return this.submit(binding);
  }
}
