// DOM layer: renders a SessionView into the console page. All engine
// output lands in live regions (alerts assertive, the transcript polite)
// and every control is a native button or input, so the whole console is
// keyboard and screen-reader operable.

import { ClientMessage, STATE_LABELS } from "./protocol.js";
import { ScrollbackEntry, SessionView } from "./viewmodel.js";

export interface ConsoleElements {
  banner: HTMLElement;
  stateChip: HTMLElement;
  progressLine: HTMLElement;
  scrollback: HTMLElement;
  alertRegion: HTMLElement;
  playbackWidget: HTMLElement;
}

export function mountConsole(root: Document): ConsoleElements {
  const get = (id: string) => {
    const el = root.getElementById(id);
    if (!el) throw new Error(`missing #${id} in console page`);
    return el as HTMLElement;
  };
  const elements: ConsoleElements = {
    banner: get("connection-banner"),
    stateChip: get("state-chip"),
    progressLine: get("progress-line"),
    scrollback: get("scrollback"),
    alertRegion: get("alert-region"),
    playbackWidget: get("playback-widget"),
  };
  elements.scrollback.setAttribute("role", "log");
  elements.scrollback.setAttribute("aria-live", "polite");
  elements.alertRegion.setAttribute("role", "alert");
  elements.alertRegion.setAttribute("aria-live", "assertive");
  return elements;
}

function entryNode(root: Document, entry: ScrollbackEntry): HTMLElement {
  const item = root.createElement("li");
  item.className = `entry entry-${entry.kind}`;
  item.dataset.key = entry.key;

  const label = root.createElement("span");
  label.className = "entry-label";
  label.textContent = entry.label;
  item.appendChild(label);

  const body = root.createElement("span");
  body.className = "entry-text";
  body.textContent = entry.text;
  item.appendChild(body);

  if (entry.evidence && entry.evidence.length > 0) {
    const chip = root.createElement("button");
    chip.type = "button";
    chip.className = "evidence-chip";
    chip.dataset.action = "play-evidence";
    const span = entry.evidence.map((e) => `s${e.sentence}`).join(", ");
    chip.textContent = `play evidence (${span})`;
    chip.setAttribute(
      "aria-label",
      `play the ${entry.evidence.length} video segments backing this answer`,
    );
    item.appendChild(chip);
  }
  return item;
}

export function renderView(root: Document, view: SessionView,
                           elements: ConsoleElements): void {
  const snapshot = view.snapshot();

  elements.banner.dataset.status = snapshot.connection;
  elements.banner.textContent =
    snapshot.connection === "open" ? "" :
    snapshot.connection === "connecting" ? "Connecting to the engine..." :
    snapshot.connection === "reconnecting" ?
      "Connection lost. Reconnecting; the transcript is preserved." :
    "Disconnected.";
  elements.banner.hidden = snapshot.connection === "open";

  elements.stateChip.textContent = snapshot.stateLabel;
  elements.stateChip.dataset.state = snapshot.stateCode;

  if (snapshot.progress) {
    const { current_step, total_steps, completed, skipped } = snapshot.progress;
    const skippedNote = skipped.length ? `, skipped ${skipped.join(", ")}` : "";
    elements.progressLine.textContent =
      `step ${current_step} of ${total_steps} (${completed.length} done${skippedNote})`;
  } else {
    elements.progressLine.textContent = "step 0 (nothing observed yet)";
  }

  // append only what is new; reconnect replays are deduped upstream
  const doc = elements.scrollback.ownerDocument ?? root;
  const existing = new Set(
    Array.from(elements.scrollback.children).map(
      (child) => (child as HTMLElement).dataset.key,
    ),
  );
  for (const entry of snapshot.entries) {
    if (!existing.has(entry.key)) {
      elements.scrollback.appendChild(entryNode(doc, entry));
      if (entry.isAlert) {
        elements.alertRegion.textContent = entry.text;
      }
    }
  }

  const playback = snapshot.playback;
  if (!playback || playback.status === "stopped") {
    elements.playbackWidget.dataset.status = "stopped";
    elements.playbackWidget.textContent = playback ? "playback stopped" : "";
  } else {
    elements.playbackWidget.dataset.status = playback.status;
    const segment = playback.segment;
    elements.playbackWidget.textContent = segment
      ? `${playback.status}: sentence ${segment.sentence} ` +
        `(${segment.t_start.toFixed(1)}s to ${segment.t_end.toFixed(1)}s)`
      : playback.status;
  }
}

export function describeState(code: string): string {
  return `${STATE_LABELS[code] ?? "?"} (${code})`;
}

export interface InputBindings {
  form: HTMLFormElement;
  textBox: HTMLInputElement;
  micButton: HTMLButtonElement;
  commandButtons: HTMLElement;
}

export function bindInputs(root: Document, send: (message: ClientMessage) => void,
                           view: SessionView, micSupported: boolean,
                           startDictation: (onText: (text: string) => void) => void): InputBindings {
  const form = root.getElementById("utterance-form") as HTMLFormElement;
  const textBox = root.getElementById("utterance-input") as HTMLInputElement;
  const micButton = root.getElementById("mic-button") as HTMLButtonElement;
  const commandButtons = root.getElementById("command-buttons") as HTMLElement;

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = textBox.value.trim();
    if (!text) return; // empty input rejected client-side
    view.noteSentUtterance(text);
    send({ type: "utterance", text });
    textBox.value = "";
  });

  micButton.hidden = !micSupported;
  micButton.addEventListener("click", () => {
    startDictation((text) => {
      textBox.value = text;
      form.requestSubmit();
    });
  });

  commandButtons.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const command = target?.dataset?.command;
    if (command === "play" || command === "pause" || command === "resume" ||
        command === "replay" || command === "stop") {
      send({ type: "command", command });
    }
  });

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target?.dataset?.action === "play-evidence") {
      send({ type: "command", command: "play" });
    }
  });

  return { form, textBox, micButton, commandButtons };
}
