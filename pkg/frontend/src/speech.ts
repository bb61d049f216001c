// Microphone dictation when the browser has speech recognition; the text
// box is always there as the universal fallback. The engine only ever
// receives text either way.

export interface SpeechInput {
  supported: boolean;
  start(onFinal: (text: string) => void, onError: (message: string) => void): void;
  stop(): void;
}

type RecognitionCtor = new () => {
  lang: string;
  continuous: boolean;
  interimResults: boolean;
  onresult: ((event: any) => void) | null;
  onerror: ((event: any) => void) | null;
  start(): void;
  stop(): void;
};

export function recognitionConstructor(root: any): RecognitionCtor | null {
  if (!root) return null;
  return root.SpeechRecognition ?? root.webkitSpeechRecognition ?? null;
}

export function createSpeechInput(root: any): SpeechInput {
  const Ctor = recognitionConstructor(root);
  if (!Ctor) {
    return {
      supported: false,
      start: (_onFinal, onError) =>
        onError("speech recognition unavailable; type your request instead"),
      stop: () => {},
    };
  }

  let active: InstanceType<RecognitionCtor> | null = null;
  return {
    supported: true,
    start(onFinal, onError) {
      const recognition = new Ctor();
      recognition.lang = "en-US";
      recognition.continuous = false;
      recognition.interimResults = false;
      recognition.onresult = (event: any) => {
        const transcript = event.results?.[0]?.[0]?.transcript ?? "";
        if (transcript) onFinal(transcript);
      };
      recognition.onerror = (event: any) =>
        onError(String(event?.error ?? "speech recognition error"));
      active = recognition;
      recognition.start();
    },
    stop() {
      active?.stop();
      active = null;
    },
  };
}
