/** Framework-free single-page UI for repair sessions.
 *
 * The app is request-driven: every button click runs one API call and
 * re-renders from the response.  Actions queue on a single promise
 * chain, so tests (and impatient users) can never interleave two
 * in-flight requests for the same session; `settled()` resolves once
 * the queue drains.
 */

import {
  Api,
  ApiError,
  type CompatibilityWarning,
  type RunResult,
  type SessionInfo,
} from "./api.js";

const STRATEGIES = Array.from({ length: 13 }, (_, i) => `C${i + 1}`);

type Attrs = Record<string, string>;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function axiomList(testId: string, axioms: string[]): HTMLElement {
  const items = axioms.length
    ? axioms.map((a) => el("li", {}, [a]))
    : [el("li", { class: "empty" }, ["(none)"])];
  return el("ul", { "data-test": testId }, items);
}

export class RepairApp {
  private sessionId: string | null = null;
  private info: SessionInfo | null = null;
  private chain: Promise<void> = Promise.resolve();

  private readonly fixtureInput: HTMLInputElement;
  private readonly strategySelect: HTMLSelectElement;
  private readonly stateLine: HTMLElement;
  private readonly errorBox: HTMLElement;
  private readonly warningBox: HTMLElement;
  private readonly questionBox: HTMLElement;
  private readonly historyBox: HTMLElement;
  private readonly resultBox: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: Api,
  ) {
    this.fixtureInput = el("input", {
      "data-test": "fixture",
      value: "mini-galen",
      title: "built-in problem name",
    });
    this.strategySelect = el(
      "select",
      { "data-test": "strategy" },
      STRATEGIES.map((s) => el("option", { value: s }, [s])),
    );
    this.stateLine = el("p", { "data-test": "state" }, ["no session"]);
    this.errorBox = el("div", { "data-test": "error", class: "error hidden" });
    this.warningBox = el("div", {
      "data-test": "warnings",
      class: "banner hidden",
    });
    this.questionBox = el("section", { class: "question hidden" });
    this.historyBox = el("section", { class: "history" });
    this.resultBox = el("section", { class: "result hidden" });

    const createButton = el("button", { "data-test": "create" }, ["Start session"]);
    createButton.addEventListener("click", () => this.enqueue(() => this.create(false)));
    const autoButton = el("button", { "data-test": "auto" }, ["Auto-run from oracle"]);
    autoButton.addEventListener("click", () => this.enqueue(() => this.create(true)));

    this.root.replaceChildren(
      el("section", { class: "setup" }, [
        el("label", {}, ["problem ", this.fixtureInput]),
        el("label", {}, ["strategy ", this.strategySelect]),
        createButton,
        autoButton,
      ]),
      this.stateLine,
      this.errorBox,
      this.warningBox,
      this.questionBox,
      this.historyBox,
      this.resultBox,
    );
  }

  /** Resolves when every queued action has finished. */
  settled(): Promise<void> {
    return this.chain;
  }

  private enqueue(task: () => Promise<void>): void {
    this.chain = this.chain
      .then(() => {
        this.clearError();
        return task();
      })
      .catch((err: unknown) => this.showError(err));
  }

  private async create(auto: boolean): Promise<void> {
    const created = await this.api.createSession({
      fixture: this.fixtureInput.value.trim(),
      options: { strategy: this.strategySelect.value },
    });
    this.sessionId = created.id;
    const info = await this.api.start(created.id, auto);
    await this.show(info);
  }

  private async answer(value: boolean): Promise<void> {
    if (!this.sessionId || this.info?.pending == null) return;
    const info = await this.api.answer(this.sessionId, this.info.pending.axiom, value);
    await this.show(info);
  }

  private async revise(axiom: string, value: boolean): Promise<void> {
    if (!this.sessionId) return;
    const info = await this.api.revise(this.sessionId, axiom, value);
    await this.show(info);
  }

  private async restart(): Promise<void> {
    if (!this.sessionId) return;
    const info = await this.api.start(this.sessionId, this.info?.auto ?? false);
    await this.show(info);
  }

  private async show(info: SessionInfo): Promise<void> {
    this.info = info;
    this.renderState(info);
    this.renderQuestion(info);
    this.renderHistory(info);
    await this.renderResult(info);
    await this.renderWarnings();
  }

  private renderState(info: SessionInfo): void {
    const extra =
      info.state === "failed" && info.error
        ? ` — ${info.error.invariant}: ${info.error.detail}`
        : "";
    this.stateLine.textContent = `session ${info.id}: ${info.state}${extra}`;
  }

  private renderQuestion(info: SessionInfo): void {
    if (info.state !== "awaiting_answer" || info.pending == null) {
      this.questionBox.classList.add("hidden");
      this.questionBox.replaceChildren();
      return;
    }
    const { axiom, context, asked } = info.pending;
    const accept = el("button", { "data-test": "accept" }, ["Accept"]);
    accept.addEventListener("click", () => this.enqueue(() => this.answer(true)));
    const reject = el("button", { "data-test": "reject" }, ["Reject"]);
    reject.addEventListener("click", () => this.enqueue(() => this.answer(false)));

    const parts: (Node | string)[] = [
      el("h2", {}, [`Question ${asked + 1}`]),
      el("p", {}, [
        "Is this inclusion right? ",
        el("strong", { "data-test": "pending-axiom" }, [axiom]),
      ]),
    ];
    if (context) {
      const about =
        context.kind === "confirm-wrong"
          ? `confirming a reportedly wrong axiom: ${context.wrong_axiom ?? ""}`
          : context.seed_axiom
            ? `${context.kind} around ${context.seed_axiom}`
            : `${context.kind} of ${context.wrong_axiom ?? ""}`;
      parts.push(el("p", { "data-test": "context-kind" }, [about]));
      if (context.left_pane.length || context.right_pane.length) {
        parts.push(
          el("div", { class: "panes" }, [
            el("div", {}, [
              el("h3", {}, [context.left_label]),
              axiomList("left-pane", context.left_pane),
            ]),
            el("div", {}, [
              el("h3", {}, [context.right_label]),
              axiomList("right-pane", context.right_pane),
            ]),
          ]),
        );
      }
    }
    parts.push(el("p", {}, [accept, " ", reject]));
    this.questionBox.replaceChildren(...parts);
    this.questionBox.classList.remove("hidden");
  }

  private renderHistory(info: SessionInfo): void {
    const rows = info.history.map((entry) => {
      const flip = el("button", { "data-test": "revise" }, [
        entry.answer ? "change to Reject" : "change to Accept",
      ]);
      flip.addEventListener("click", () =>
        this.enqueue(() => this.revise(entry.axiom, !entry.answer)),
      );
      return el("li", { "data-axiom": entry.axiom }, [
        el("span", {}, [
          `${entry.axiom} — ${entry.answer ? "accepted" : "rejected"}` +
            (entry.revised ? " (revised)" : ""),
        ]),
        " ",
        flip,
      ]);
    });
    const parts: (Node | string)[] = [];
    if (rows.length) {
      parts.push(el("h2", {}, ["Answers"]), el("ul", { "data-test": "history" }, rows));
    }
    if (info.state === "stale" || info.state === "failed") {
      const restart = el("button", { "data-test": "restart" }, ["Restart run"]);
      restart.addEventListener("click", () => this.enqueue(() => this.restart()));
      parts.push(el("p", {}, [restart]));
    }
    this.historyBox.replaceChildren(...parts);
  }

  private async renderResult(info: SessionInfo): Promise<void> {
    if (info.state !== "done" || this.sessionId == null) {
      this.resultBox.classList.add("hidden");
      this.resultBox.replaceChildren();
      return;
    }
    const result: RunResult = await this.api.result(this.sessionId);
    this.resultBox.replaceChildren(
      el("h2", {}, [
        `Repair ${result.repair_valid ? "verified" : "FAILED VERIFICATION"}`,
      ]),
      el("p", { "data-test": "verdict" }, [
        `strategy ${result.strategy}, ${result.queries_distinct} questions, ` +
          `repair ${result.repair_valid ? "valid" : "invalid"}`,
      ]),
      el("div", { class: "diff" }, [
        el("div", {}, [el("h3", {}, ["Removed"]), axiomList("removed", result.removed)]),
        el("div", {}, [el("h3", {}, ["Added"]), axiomList("added", result.added)]),
      ]),
      el("details", {}, [
        el("summary", {}, ["Full report"]),
        el("pre", { "data-test": "report" }, [result.report]),
      ]),
    );
    this.resultBox.classList.remove("hidden");
  }

  private async renderWarnings(): Promise<void> {
    if (this.sessionId == null) return;
    const { warnings } = await this.api.warnings(this.sessionId);
    if (!warnings.length) {
      this.warningBox.classList.add("hidden");
      this.warningBox.replaceChildren();
      return;
    }
    this.warningBox.replaceChildren(
      el("strong", {}, ["Your answers contradict each other"]),
      el(
        "ul",
        {},
        warnings.map((w: CompatibilityWarning) =>
          el("li", {}, [`${w.kind}: ${w.axiom} (because of ${w.support.join(", ")})`]),
        ),
      ),
    );
    this.warningBox.classList.remove("hidden");
  }

  private showError(err: unknown): void {
    const text =
      err instanceof ApiError
        ? `${err.code}: ${err.message}`
        : err instanceof Error
          ? err.message
          : String(err);
    this.errorBox.textContent = text;
    this.errorBox.classList.remove("hidden");
  }

  private clearError(): void {
    this.errorBox.classList.add("hidden");
    this.errorBox.textContent = "";
  }
}

export function createApp(root: HTMLElement, api: Api): RepairApp {
  return new RepairApp(root, api);
}
