/**
 * Framework-free typeahead against the suggest endpoint.
 *
 * Wires an input and a listbox together: debounced fetches, top-10
 * rendering in server order, stale-response discarding by echo
 * comparison, and standard combobox keyboard navigation. Selecting a
 * completion only fills the input; nothing is ever reported back to the
 * server, so there is no feedback loop by construction.
 */

export type SuggestResponse = [string, string[]];

export interface TypeaheadOptions {
  /** Absolute or relative URL of the suggest endpoint. */
  endpoint?: string;
  /** Quiet time after the last keystroke before a request goes out. */
  debounceMs?: number;
  /** Upper bound on rendered completions. */
  maxItems?: number;
  /** Injectable fetch, for tests. */
  fetchFn?: (url: string) => Promise<Response>;
  /** Test hook: called after every render with the echo that produced it. */
  onRender?: (echo: string, items: string[]) => void;
}

export interface TypeaheadState {
  inputText: string;
  requestInFlight: boolean;
  lastEcho: string | null;
  completions: string[];
  selectedIndex: number;
  open: boolean;
}

export interface TypeaheadController {
  getState(): TypeaheadState;
  destroy(): void;
}

export function attachTypeahead(
  input: HTMLInputElement,
  list: HTMLElement,
  options: TypeaheadOptions = {},
): TypeaheadController {
  const endpoint = options.endpoint ?? '/suggest';
  const debounceMs = options.debounceMs ?? 150;
  const maxItems = options.maxItems ?? 10;
  const fetchFn = options.fetchFn ?? ((url: string) => fetch(url));

  const state: TypeaheadState = {
    inputText: input.value,
    requestInFlight: false,
    lastEcho: null,
    completions: [],
    selectedIndex: -1,
    open: false,
  };

  input.setAttribute('role', 'combobox');
  input.setAttribute('aria-autocomplete', 'list');
  input.setAttribute('aria-expanded', 'false');
  list.setAttribute('role', 'listbox');
  list.hidden = true;

  let timer: ReturnType<typeof setTimeout> | undefined;
  let lastRequested: string | null = null;

  function render(): void {
    list.textContent = '';
    for (const [i, text] of state.completions.entries()) {
      const item = document.createElement('li');
      item.setAttribute('role', 'option');
      item.setAttribute('aria-selected', String(i === state.selectedIndex));
      if (i === state.selectedIndex) item.classList.add('selected');
      item.textContent = text;
      item.addEventListener('mousedown', (event) => {
        event.preventDefault(); // keep focus in the input
        select(i);
      });
      list.appendChild(item);
    }
    state.open = state.completions.length > 0;
    list.hidden = !state.open;
    input.setAttribute('aria-expanded', String(state.open));
  }

  function close(): void {
    state.completions = [];
    state.selectedIndex = -1;
    state.lastEcho = null;
    render();
  }

  function select(index: number): void {
    const chosen = state.completions[index];
    if (chosen === undefined) return;
    input.value = chosen;
    state.inputText = chosen;
    lastRequested = chosen; // picking a completion must not re-query it
    close();
  }

  async function request(text: string): Promise<void> {
    lastRequested = text;
    state.requestInFlight = true;
    try {
      const url = `${endpoint}?q=${encodeURIComponent(text)}&k=${maxItems}`;
      const response = await fetchFn(url);
      if (!response.ok) return;
      const body = (await response.json()) as SuggestResponse;
      const [echo, completions] = body;
      // a response for anything but the current text is stale: drop it
      if (echo !== input.value) return;
      state.lastEcho = echo;
      state.completions = completions.slice(0, maxItems);
      state.selectedIndex = -1;
      render();
      options.onRender?.(echo, state.completions);
    } catch {
      // network errors leave the previous dropdown in place
    } finally {
      state.requestInFlight = false;
    }
  }

  function onInput(): void {
    state.inputText = input.value;
    if (timer !== undefined) clearTimeout(timer);
    if (input.value === '') {
      lastRequested = null;
      close();
      return;
    }
    timer = setTimeout(() => {
      if (input.value !== '' && input.value !== lastRequested) {
        void request(input.value);
      }
    }, debounceMs);
  }

  function onKeydown(event: KeyboardEvent): void {
    if (event.key === 'Escape') {
      close();
      return;
    }
    if (!state.open) return;
    const n = state.completions.length;
    if (event.key === 'ArrowDown') {
      event.preventDefault();
      state.selectedIndex = (state.selectedIndex + 1) % n;
      render();
    } else if (event.key === 'ArrowUp') {
      event.preventDefault();
      state.selectedIndex = state.selectedIndex <= 0 ? n - 1 : state.selectedIndex - 1;
      render();
    } else if (event.key === 'Enter' && state.selectedIndex >= 0) {
      event.preventDefault();
      select(state.selectedIndex);
    }
  }

  input.addEventListener('input', onInput);
  input.addEventListener('keydown', onKeydown);

  return {
    getState: () => ({ ...state, completions: [...state.completions] }),
    destroy: () => {
      if (timer !== undefined) clearTimeout(timer);
      input.removeEventListener('input', onInput);
      input.removeEventListener('keydown', onKeydown);
    },
  };
}
