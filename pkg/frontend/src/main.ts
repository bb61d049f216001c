// Console bootstrap: connect to the engine (or the replaying mock when the
// page is opened with ?mock), wire inputs, and keep the view rendered.

import { MockEngineTransport } from "./mockEngine.js";
import { bindInputs, mountConsole, renderView } from "./render.js";
import { createSpeechInput } from "./speech.js";
import { Transport, WebSocketTransport } from "./transport.js";
import { SessionView } from "./viewmodel.js";

async function pickTransport(): Promise<Transport> {
  const params = new URLSearchParams(window.location.search);
  if (params.has("mock")) {
    const fixture = params.get("mock") || "tests/fixtures/session_stream.jsonl";
    const response = await fetch(fixture);
    return new MockEngineTransport(await response.text(), 150);
  }
  const endpoint = params.get("engine") ??
    `ws://${window.location.hostname}:8757/ws`;
  return new WebSocketTransport(endpoint);
}

async function boot(): Promise<void> {
  const view = new SessionView();
  const elements = mountConsole(document);
  const transport = await pickTransport();
  const speech = createSpeechInput(window);

  view.onChange(() => renderView(document, view, elements));
  bindInputs(document, (message) => transport.send(message), view,
             speech.supported,
             (onText) => speech.start(onText, (message) => {
               elements.alertRegion.textContent = message;
             }));

  transport.start({
    onLine: (line) => {
      try {
        view.applyLine(line);
      } catch (error) {
        elements.alertRegion.textContent = `unreadable engine message: ${error}`;
      }
    },
    onStatus: (status) => view.setConnection(status),
  });

  const exportButton = document.getElementById("export-button");
  exportButton?.addEventListener("click", () => {
    const blob = new Blob([view.exportScrollback()], { type: "application/jsonl" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "session_scrollback.jsonl";
    link.click();
  });

  renderView(document, view, elements);
}

boot().catch((error) => {
  document.body.textContent = `console failed to start: ${error}`;
});
