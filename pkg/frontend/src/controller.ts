// UI state and the live-completion request loop: 150 ms debounce after the
// last keystroke, at most one logical in-flight request, stale responses
// (older than the latest issued request) discarded.

import { ApiClient, Candidate, tokenize } from "./api.js";
import { debounce, Debounced } from "./debounce.js";

export const DEBOUNCE_MS = 150;
export const DEFAULT_K = 5;

export interface UiState {
  activeTask: string;
  selectedModel: string;
  editorText: string;
  suggestions: Candidate[];
  requestInFlight: boolean;
  error: string | null;
}

export type StateListener = (state: UiState) => void;

export class CompletionController {
  private state: UiState = {
    activeTask: "complete",
    selectedModel: "",
    editorText: "",
    suggestions: [],
    requestInFlight: false,
    error: null,
  };
  private latestRequest = 0;
  private readonly scheduleFetch: Debounced<[]>;

  constructor(
    private readonly client: ApiClient,
    private readonly listener: StateListener,
    private readonly k: number = DEFAULT_K,
  ) {
    this.scheduleFetch = debounce(() => {
      void this.fetchNow();
    }, DEBOUNCE_MS);
  }

  getState(): UiState {
    return { ...this.state };
  }

  private update(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    this.listener(this.getState());
  }

  selectTask(task: string): void {
    this.update({ activeTask: task, suggestions: [], error: null });
  }

  selectModel(modelId: string): void {
    this.update({ selectedModel: modelId });
    if (this.state.editorText.trim().length > 0) {
      this.scheduleFetch();
    }
  }

  onInput(text: string): void {
    this.update({ editorText: text });
    if (tokenize(text).length === 0) {
      this.scheduleFetch.cancel();
      this.update({ suggestions: [], error: null });
      return;
    }
    this.scheduleFetch();
  }

  /** Issues the completion request immediately (the debounce target). */
  async fetchNow(): Promise<void> {
    const tokens = tokenize(this.state.editorText);
    if (tokens.length === 0 || this.state.selectedModel === "") {
      return;
    }
    const requestId = ++this.latestRequest;
    this.update({ requestInFlight: true });
    try {
      const candidates = await this.client.complete({
        model_id: this.state.selectedModel,
        tokens,
        k: this.k,
      });
      if (requestId !== this.latestRequest) {
        return; // a newer request superseded this one
      }
      this.update({ suggestions: candidates, requestInFlight: false, error: null });
    } catch (err) {
      if (requestId !== this.latestRequest) {
        return;
      }
      const message = err instanceof Error ? err.message : String(err);
      this.update({ suggestions: [], requestInFlight: false, error: message });
    }
  }
}
