// Pure view state for the session console. Holds no dialogue logic: it
// replays whatever the engine stream says, so refreshing the page and
// replaying the stream reconstructs an identical view.

import {
  EngineMessage,
  PlaybackMessage,
  ProgressSnapshot,
  STATE_LABELS,
  assertNever,
  parseEngineMessage,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "reconnecting" | "closed";

export interface ScrollbackEntry {
  key: string; // dedupe key: engine record_id or local send counter
  kind: EngineMessage["kind"] | "sent_utterance";
  label: string;
  text: string;
  rawLine: string; // exact line as received; export reproduces these
  evidence?: { sentence: number; t_start: number; t_end: number }[];
  isAlert?: boolean;
}

export interface SessionViewSnapshot {
  connection: ConnectionStatus;
  stateCode: string;
  stateLabel: string;
  progress: ProgressSnapshot | null;
  playback: PlaybackMessage | null;
  entries: ScrollbackEntry[];
}

export class SessionView {
  connection: ConnectionStatus = "connecting";
  stateCode = "S0";
  progress: ProgressSnapshot | null = null;
  playback: PlaybackMessage | null = null;
  entries: ScrollbackEntry[] = [];
  lastRecordId = 0;

  private seen = new Set<string>();
  private sendCounter = 0;
  private listeners: (() => void)[] = [];

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  setConnection(status: ConnectionStatus): void {
    this.connection = status;
    this.notify();
  }

  /** Record a locally sent utterance so the transcript reads in order. */
  noteSentUtterance(text: string): void {
    this.sendCounter += 1;
    const line = JSON.stringify({ kind: "sent_utterance", text });
    this.entries.push({
      key: `local:${this.sendCounter}`,
      kind: "sent_utterance",
      label: "you",
      text,
      rawLine: line,
    });
    this.notify();
  }

  /** Apply one raw stream line; duplicate record_ids are dropped. */
  applyLine(line: string): boolean {
    return this.apply(parseEngineMessage(line), line);
  }

  apply(message: EngineMessage, rawLine?: string): boolean {
    const key = `engine:${message.record_id}`;
    if (this.seen.has(key)) return false;
    this.seen.add(key);
    this.lastRecordId = Math.max(this.lastRecordId, message.record_id);

    const raw = rawLine ?? JSON.stringify(message);
    const entry = this.render(message, key, raw);
    this.entries.push(entry);
    this.notify();
    return true;
  }

  private render(message: EngineMessage, key: string, raw: string): ScrollbackEntry {
    switch (message.kind) {
      case "state_change":
        this.stateCode = message.to_state;
        this.progress = message.progress;
        return {
          key,
          kind: message.kind,
          label: "state",
          text: `${STATE_LABELS[message.from_state] ?? message.from_state} -> ` +
            `${STATE_LABELS[message.to_state] ?? message.to_state} (${message.event})`,
          rawLine: raw,
        };
      case "response":
        return {
          key,
          kind: message.kind,
          label: "assistant",
          text: message.text,
          rawLine: raw,
          evidence: message.evidence,
        };
      case "alert":
        this.progress = message.progress;
        return {
          key,
          kind: message.kind,
          label: `alert ${message.event}`,
          text: message.text,
          rawLine: raw,
          isAlert: true,
        };
      case "playback":
        this.playback = message;
        return {
          key,
          kind: message.kind,
          label: "playback",
          text: message.segment
            ? `${message.status} sentence ${message.segment.sentence} ` +
              `[${message.segment.t_start.toFixed(1)}-${message.segment.t_end.toFixed(1)}s] ` +
              `at ${message.position.toFixed(1)}s`
            : message.status,
          rawLine: raw,
        };
      case "tts":
        return {
          key,
          kind: message.kind,
          label: "tts",
          text: message.failed
            ? `speech synthesis failed for response ${message.response_id} (text shown above)`
            : `spoke response ${message.response_id} at ${message.speed}x`,
          rawLine: raw,
        };
      case "error":
        return {
          key,
          kind: message.kind,
          label: `error ${message.code}`,
          text: message.text,
          rawLine: raw,
        };
      default:
        return assertNever(message);
    }
  }

  /** Exact stream lines of every rendered engine message, in order. */
  exportScrollback(): string {
    return this.entries
      .filter((entry) => entry.kind !== "sent_utterance")
      .map((entry) => entry.rawLine)
      .join("\n") + "\n";
  }

  snapshot(): SessionViewSnapshot {
    return {
      connection: this.connection,
      stateCode: this.stateCode,
      stateLabel: `${STATE_LABELS[this.stateCode] ?? "?"} (${this.stateCode})`,
      progress: this.progress,
      playback: this.playback,
      entries: [...this.entries],
    };
  }
}
