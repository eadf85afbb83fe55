/** End-to-end UI tests against a live service (spawned in global-setup).
 *
 * Every test drives the page the way a person would: type, click, read
 * the DOM.  Answers come from the demo problem's own oracle table, so
 * the expected question sequence and final diff are fully determined.
 */

import { expect, it } from "vitest";

import { Api } from "../src/api.js";
import { createApp, RepairApp } from "../src/app.js";
import { SERVICE_URL } from "./service-url.js";

const api = new Api(SERVICE_URL);

const C9_QUESTIONS = [
  "PPr SubClassOf IPr",
  "IPr SubClassOf GPr",
  "E SubClassOf PPr",
  "E SubClassOf GPr",
  "E SubClassOf IPr",
  "E SubClassOf NPr",
  "PPr SubClassOf GPr",
  "PPr SubClassOf NPr",
  "IPr SubClassOf NPr",
];

function mount(): { app: RepairApp; root: HTMLElement } {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.append(root);
  return { app: createApp(root, api), root };
}

function q<T extends Element>(root: ParentNode, selector: string): T {
  const node = root.querySelector(selector);
  if (node == null) throw new Error(`missing element ${selector}`);
  return node as T;
}

function textOf(root: ParentNode, selector: string): string {
  return q(root, selector).textContent ?? "";
}

function items(root: ParentNode, testId: string): string[] {
  return Array.from(root.querySelectorAll(`[data-test="${testId}"] li`))
    .map((li) => li.textContent ?? "")
    .filter((text) => text !== "(none)");
}

function hidden(root: ParentNode, selector: string): boolean {
  return q<HTMLElement>(root, selector).classList.contains("hidden");
}

async function click(app: RepairApp, root: ParentNode, selector: string): Promise<void> {
  q<HTMLElement>(root, selector).click();
  await app.settled();
}

let domainTruth: Set<string> | undefined;

async function truth(): Promise<Set<string>> {
  if (domainTruth == null) {
    const fixture = await api.fixture("mini-galen");
    domainTruth = new Set(
      (fixture.oracle ?? "")
        .split("\n")
        .filter((line) => line.startsWith("true:"))
        .map((line) => line.slice("true:".length).trim()),
    );
  }
  return domainTruth;
}

async function startInteractive(
  app: RepairApp,
  root: ParentNode,
  strategy = "C9",
): Promise<void> {
  q<HTMLSelectElement>(root, '[data-test="strategy"]').value = strategy;
  await click(app, root, '[data-test="create"]');
}

/** Answer each pending question from the domain table (with overrides). */
async function answerUntilSettled(
  app: RepairApp,
  root: ParentNode,
  overrides: Record<string, boolean> = {},
): Promise<string[]> {
  const trueSet = await truth();
  const asked: string[] = [];
  for (let i = 0; i < 40; i++) {
    if (!textOf(root, '[data-test="state"]').includes("awaiting_answer")) break;
    const axiom = textOf(root, '[data-test="pending-axiom"]');
    asked.push(axiom);
    const value = overrides[axiom] ?? trueSet.has(axiom);
    await click(app, root, value ? '[data-test="accept"]' : '[data-test="reject"]');
  }
  return asked;
}

it("walks through a full session and shows the removed/added diff", async () => {
  const { app, root } = mount();
  await startInteractive(app, root);

  expect(textOf(root, '[data-test="state"]')).toContain("awaiting_answer");
  expect(textOf(root, '[data-test="context-kind"]')).toContain(
    "confirming a reportedly wrong axiom",
  );

  const asked = await answerUntilSettled(app, root);
  expect(asked).toEqual(C9_QUESTIONS);

  expect(textOf(root, '[data-test="state"]')).toContain("done");
  expect(items(root, "removed")).toEqual([
    "PPr SubClassOf IPr",
    "IPr SubClassOf GPr",
    "E SubClassOf PPr",
  ]);
  expect(items(root, "added")).toEqual(["PPr SubClassOf NPr", "IPr SubClassOf NPr"]);
  expect(textOf(root, '[data-test="report"]')).toContain("repair_valid: true");
  expect(hidden(root, '[data-test="warnings"]')).toBe(true);
});

it("shows candidate panes while weakening", async () => {
  const { app, root } = mount();
  await startInteractive(app, root);
  for (const axiom of C9_QUESTIONS.slice(0, 3)) {
    expect(textOf(root, '[data-test="pending-axiom"]')).toBe(axiom);
    await click(app, root, '[data-test="reject"]');
  }
  expect(textOf(root, '[data-test="context-kind"]')).toContain("weakening");
  expect(items(root, "left-pane")).toContain("E");
  expect(items(root, "right-pane")).toContain("GPr");
});

it("raises a warning banner when answers contradict each other", async () => {
  const { app, root } = mount();
  await startInteractive(app, root);
  await answerUntilSettled(app, root, {
    "PPr SubClassOf GPr": true,
    "PPr SubClassOf NPr": false,
  });

  expect(hidden(root, '[data-test="warnings"]')).toBe(false);
  const banner = textOf(root, '[data-test="warnings"]');
  expect(banner).toContain("false-marked-but-derivable");
  expect(banner).toContain("PPr SubClassOf NPr");
  expect(banner).toContain("GPr SubClassOf NPr");
});

it("revises an answer, goes stale, and replays to a new result", async () => {
  const { app, root } = mount();
  await startInteractive(app, root);
  await answerUntilSettled(app, root);

  await click(
    app,
    root,
    '[data-test="history"] li[data-axiom="PPr SubClassOf NPr"] button',
  );
  expect(textOf(root, '[data-test="state"]')).toContain("stale");

  await click(app, root, '[data-test="restart"]');
  expect(textOf(root, '[data-test="state"]')).toContain("done");
  expect(items(root, "added")).toEqual(["IPr SubClassOf NPr"]);
  const row = textOf(root, '[data-test="history"] li[data-axiom="PPr SubClassOf NPr"]');
  expect(row).toContain("(revised)");
});

it("fails the run when a wrong axiom is confirmed, then recovers", async () => {
  const { app, root } = mount();
  await startInteractive(app, root);
  await click(app, root, '[data-test="accept"]'); // "PPr SubClassOf IPr is right"

  expect(textOf(root, '[data-test="state"]')).toContain("failed");

  await click(
    app,
    root,
    '[data-test="history"] li[data-axiom="PPr SubClassOf IPr"] button',
  );
  await click(app, root, '[data-test="restart"]');
  expect(textOf(root, '[data-test="state"]')).toContain("awaiting_answer");
  expect(textOf(root, '[data-test="pending-axiom"]')).toBe("IPr SubClassOf GPr");
});

it("auto-runs a session from the attached oracle", async () => {
  const { app, root } = mount();
  q<HTMLSelectElement>(root, '[data-test="strategy"]').value = "C9";
  await click(app, root, '[data-test="auto"]');

  expect(textOf(root, '[data-test="state"]')).toContain("done");
  expect(textOf(root, '[data-test="verdict"]')).toContain("9 questions");
  expect(items(root, "added")).toEqual(["PPr SubClassOf NPr", "IPr SubClassOf NPr"]);
});

it("surfaces API errors without losing the page", async () => {
  const { app, root } = mount();
  q<HTMLInputElement>(root, '[data-test="fixture"]').value = "nope";
  await click(app, root, '[data-test="create"]');

  expect(hidden(root, '[data-test="error"]')).toBe(false);
  expect(textOf(root, '[data-test="error"]')).toContain("not-found");
});
