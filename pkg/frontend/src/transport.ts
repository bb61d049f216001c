// Engine connection over one duplex websocket, with automatic reconnect.
// The view never talks to the socket directly; anything implementing
// Transport (including the replaying mock engine) can stand in.

import { ClientMessage } from "./protocol.js";

export interface TransportHandlers {
  onLine: (line: string) => void;
  onStatus: (status: "connecting" | "open" | "reconnecting" | "closed") => void;
}

export interface Transport {
  start(handlers: TransportHandlers): void;
  send(message: ClientMessage): void;
  close(): void;
}

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
}

export interface WebSocketTransportOptions {
  /** Factory so tests can inject fake sockets. Defaults to new WebSocket(url). */
  socketFactory?: (url: string) => SocketLike;
  /** Base backoff in ms; doubles per failed attempt up to maxBackoffMs. */
  backoffMs?: number;
  maxBackoffMs?: number;
  /** Scheduler injection point for tests. */
  setTimer?: (fn: () => void, ms: number) => unknown;
}

export class WebSocketTransport implements Transport {
  private handlers: TransportHandlers | null = null;
  private socket: SocketLike | null = null;
  private attempts = 0;
  private closed = false;
  private lastSeen = 0;
  private queue: ClientMessage[] = [];
  private readonly factory: (url: string) => SocketLike;
  private readonly backoffMs: number;
  private readonly maxBackoffMs: number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;

  constructor(private url: string, options: WebSocketTransportOptions = {}) {
    this.factory = options.socketFactory ??
      ((target) => new WebSocket(target) as unknown as SocketLike);
    this.backoffMs = options.backoffMs ?? 500;
    this.maxBackoffMs = options.maxBackoffMs ?? 8000;
    this.setTimer = options.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
  }

  start(handlers: TransportHandlers): void {
    this.handlers = handlers;
    this.connect("connecting");
  }

  private connect(phase: "connecting" | "reconnecting"): void {
    if (this.closed || !this.handlers) return;
    this.handlers.onStatus(phase);
    const socket = this.factory(this.url);
    this.socket = socket;

    socket.onopen = () => {
      this.attempts = 0;
      this.handlers?.onStatus("open");
      // ask the engine to re-deliver anything after the last seen id;
      // the viewmodel dedupes overlap by record_id
      socket.send(JSON.stringify({ type: "sync", after: this.lastSeen }));
      for (const message of this.queue.splice(0)) {
        socket.send(JSON.stringify(message));
      }
    };
    socket.onmessage = (event) => {
      try {
        const data = JSON.parse(event.data);
        if (typeof data.record_id === "number") {
          this.lastSeen = Math.max(this.lastSeen, data.record_id);
        }
      } catch {
        // fall through; the view reports parse errors
      }
      this.handlers?.onLine(event.data);
    };
    socket.onclose = () => this.scheduleReconnect();
    socket.onerror = () => {
      try {
        socket.close();
      } catch {
        // already closed
      }
    };
  }

  private scheduleReconnect(): void {
    if (this.closed || !this.handlers) return;
    this.attempts += 1;
    const delay = Math.min(this.backoffMs * 2 ** (this.attempts - 1), this.maxBackoffMs);
    this.handlers.onStatus("reconnecting");
    this.setTimer(() => this.connect("reconnecting"), delay);
  }

  send(message: ClientMessage): void {
    const socket = this.socket;
    if (socket && this.attempts === 0 && !this.closed) {
      socket.send(JSON.stringify(message));
    } else {
      this.queue.push(message);
    }
  }

  close(): void {
    this.closed = true;
    this.handlers?.onStatus("closed");
    this.socket?.close();
  }
}
