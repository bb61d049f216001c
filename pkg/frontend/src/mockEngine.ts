// Replaying mock engine: feeds a recorded stream fixture through the same
// Transport seam the live websocket uses. Deterministic, instant by
// default, so tests and the demo page need no backend.

import { ClientMessage } from "./protocol.js";
import { Transport, TransportHandlers } from "./transport.js";

export class MockEngineTransport implements Transport {
  sentMessages: ClientMessage[] = [];
  private handlers: TransportHandlers | null = null;
  private lines: string[];

  constructor(streamText: string, private delayMs = 0) {
    this.lines = streamText.split("\n").filter((line) => line.trim().length > 0);
  }

  start(handlers: TransportHandlers): void {
    this.handlers = handlers;
    handlers.onStatus("connecting");
    handlers.onStatus("open");
    if (this.delayMs <= 0) {
      for (const line of this.lines) handlers.onLine(line);
      return;
    }
    let index = 0;
    const pump = () => {
      if (!this.handlers || index >= this.lines.length) return;
      this.handlers.onLine(this.lines[index]);
      index += 1;
      setTimeout(pump, this.delayMs);
    };
    setTimeout(pump, this.delayMs);
  }

  /** Re-deliver the whole stream, as the engine does after a reconnect. */
  replayBacklog(): void {
    if (!this.handlers) return;
    for (const line of this.lines) this.handlers.onLine(line);
  }

  send(message: ClientMessage): void {
    this.sentMessages.push(message);
  }

  close(): void {
    this.handlers?.onStatus("closed");
    this.handlers = null;
  }
}
