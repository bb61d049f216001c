// Message schema of the engine's streaming session API. One JSON object per
// websocket text frame; every engine message carries a unique increasing
// record_id used for reconnect dedupe.

export interface ProgressSnapshot {
  current_step: number;
  total_steps: number;
  completed: number[];
  skipped: number[];
}

export interface SegmentInterval {
  sentence: number;
  t_start: number;
  t_end: number;
}

interface EngineMessageBase {
  record_id: number;
  t: number;
}

export interface StateChangeMessage extends EngineMessageBase {
  kind: "state_change";
  from_state: string;
  to_state: string;
  event: string;
  progress: ProgressSnapshot;
}

export interface ResponseMessage extends EngineMessageBase {
  kind: "response";
  response_id: number;
  state: string;
  text: string;
  evidence: SegmentInterval[];
  sources: number[];
}

export interface AlertMessage extends EngineMessageBase {
  kind: "alert";
  event: string;
  judgment_id: number;
  text: string;
  progress: ProgressSnapshot;
}

export interface PlaybackMessage extends EngineMessageBase {
  kind: "playback";
  status: "stopped" | "playing" | "paused";
  segment: SegmentInterval | null;
  position: number;
  queue_length: number;
  separator_cue: number;
}

export interface TtsMessage extends EngineMessageBase {
  kind: "tts";
  response_id: number;
  audio_ref: string | null;
  speed: number;
  failed: boolean;
}

export interface ErrorMessage extends EngineMessageBase {
  kind: "error";
  code: string;
  text: string;
}

export type EngineMessage =
  | StateChangeMessage
  | ResponseMessage
  | AlertMessage
  | PlaybackMessage
  | TtsMessage
  | ErrorMessage;

export type EngineMessageKind = EngineMessage["kind"];

// Runtime mirror of the union; the exhaustiveness test walks this list and
// the compiler pins it to the union via the satisfies clause.
export const ENGINE_MESSAGE_KINDS = [
  "state_change",
  "response",
  "alert",
  "playback",
  "tts",
  "error",
] as const satisfies readonly EngineMessageKind[];

export type ClientMessage =
  | { type: "utterance"; text: string }
  | { type: "frames"; records: { t: number; descriptor: number[] }[] }
  | { type: "command"; command: "play" | "pause" | "resume" | "replay" | "stop" }
  | { type: "config"; tts_speed: number }
  | { type: "advance"; seconds: number }
  | { type: "sync"; after: number };

export function parseEngineMessage(line: string): EngineMessage {
  const data = JSON.parse(line);
  if (
    typeof data !== "object" ||
    data === null ||
    !(ENGINE_MESSAGE_KINDS as readonly string[]).includes(data.kind) ||
    typeof data.record_id !== "number"
  ) {
    throw new Error(`not an engine message: ${line}`);
  }
  return data as EngineMessage;
}

export function assertNever(value: never): never {
  throw new Error(`unhandled message kind: ${JSON.stringify(value)}`);
}

export const STATE_LABELS: Record<string, string> = {
  S0: "Idle",
  S1: "Food state",
  S2: "Step guidance",
  S3: "Problem solving",
  S4: "General visual",
  S5: "Correction review",
  S6: "Detail elaboration",
};
