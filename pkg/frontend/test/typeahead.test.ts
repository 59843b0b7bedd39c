// Unit tests: debouncing, stale-response discarding, keyboard navigation.
// The fetch function is injected, so every network interleaving is scripted.

import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';
import { attachTypeahead, type TypeaheadController } from '../src/typeahead';

function jsonResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { 'content-type': 'application/json; charset=utf-8' },
  });
}

interface Pending {
  url: string;
  resolve: (r: Response) => void;
}

function setup(options: { debounceMs?: number; maxItems?: number } = {}) {
  const input = document.createElement('input');
  const list = document.createElement('ul');
  document.body.append(input, list);
  const pending: Pending[] = [];
  const fetchFn = vi.fn(
    (url: string) =>
      new Promise<Response>((resolve) => {
        pending.push({ url, resolve });
      }),
  );
  const renders: Array<{ echo: string; valueAtRender: string }> = [];
  const controller = attachTypeahead(input, list, {
    endpoint: '/suggest',
    fetchFn,
    onRender: (echo) => renders.push({ echo, valueAtRender: input.value }),
    ...options,
  });
  return { input, list, pending, fetchFn, controller, renders };
}

function type(input: HTMLInputElement, text: string) {
  input.value = text;
  input.dispatchEvent(new Event('input'));
}

function items(list: HTMLElement): string[] {
  return Array.from(list.querySelectorAll('li')).map((li) => li.textContent ?? '');
}

let active: TypeaheadController | undefined;

beforeEach(() => {
  vi.useFakeTimers();
});

afterEach(() => {
  active?.destroy();
  active = undefined;
  document.body.innerHTML = '';
  vi.useRealTimers();
});

describe('debouncing', () => {
  it('collapses rapid keystrokes into one request for the final text', async () => {
    const t = setup();
    active = t.controller;
    type(t.input, 'g');
    vi.advanceTimersByTime(80);
    type(t.input, 'ge');
    vi.advanceTimersByTime(80);
    type(t.input, 'geo');
    vi.advanceTimersByTime(150);
    expect(t.fetchFn).toHaveBeenCalledTimes(1);
    expect(t.pending[0].url).toBe('/suggest?q=geo&k=10');
  });

  it('sends nothing before the quiet period elapses', () => {
    const t = setup();
    active = t.controller;
    type(t.input, 'geo');
    vi.advanceTimersByTime(149);
    expect(t.fetchFn).not.toHaveBeenCalled();
  });

  it('does not re-request unchanged text', () => {
    const t = setup();
    active = t.controller;
    type(t.input, 'geo');
    vi.advanceTimersByTime(150);
    type(t.input, 'geo'); // same value again
    vi.advanceTimersByTime(150);
    expect(t.fetchFn).toHaveBeenCalledTimes(1);
  });

  it('sends no request for cleared input and hides the dropdown', async () => {
    const t = setup();
    active = t.controller;
    type(t.input, 'ge');
    vi.advanceTimersByTime(150);
    t.pending[0].resolve(jsonResponse(['ge', ['george']]));
    await vi.runAllTimersAsync();
    expect(t.list.hidden).toBe(false);
    type(t.input, '');
    vi.advanceTimersByTime(150);
    expect(t.fetchFn).toHaveBeenCalledTimes(1);
    expect(t.list.hidden).toBe(true);
  });
});

describe('rendering', () => {
  it('renders completions in server order, capped at maxItems', async () => {
    const t = setup({ maxItems: 3 });
    active = t.controller;
    type(t.input, 'n');
    vi.advanceTimersByTime(150);
    t.pending[0].resolve(jsonResponse(['n', ['n1', 'n2', 'n3', 'n4']]));
    await vi.runAllTimersAsync();
    expect(items(t.list)).toEqual(['n1', 'n2', 'n3']);
    expect(t.pending[0].url).toBe('/suggest?q=n&k=3');
  });

  it('discards a late response for older text', async () => {
    const t = setup();
    active = t.controller;
    type(t.input, 'ge');
    vi.advanceTimersByTime(150);
    type(t.input, 'geor');
    vi.advanceTimersByTime(150);
    expect(t.pending.length).toBe(2);
    // the newer response lands first; the older one arrives after
    t.pending[1].resolve(jsonResponse(['geor', ['george washington']]));
    await vi.runAllTimersAsync();
    t.pending[0].resolve(jsonResponse(['ge', ['gettysburg', 'germany']]));
    await vi.runAllTimersAsync();
    expect(items(t.list)).toEqual(['george washington']);
    expect(t.renders.length).toBe(1);
  });

  it('every render matches the input value at render time', async () => {
    const t = setup();
    active = t.controller;
    type(t.input, 'a');
    vi.advanceTimersByTime(150);
    t.pending[0].resolve(jsonResponse(['a', ['alpha']]));
    await vi.runAllTimersAsync();
    type(t.input, 'ab');
    vi.advanceTimersByTime(150);
    t.pending[1].resolve(jsonResponse(['ab', ['abacus']]));
    await vi.runAllTimersAsync();
    expect(t.renders.every((r) => r.echo === r.valueAtRender)).toBe(true);
  });
});

describe('keyboard and selection', () => {
  async function withDropdown() {
    const t = setup();
    active = t.controller;
    type(t.input, 'ge');
    vi.advanceTimersByTime(150);
    t.pending[0].resolve(jsonResponse(['ge', ['george washington', 'george floyd', 'georgia']]));
    await vi.runAllTimersAsync();
    return t;
  }

  function press(input: HTMLInputElement, key: string) {
    input.dispatchEvent(new KeyboardEvent('keydown', { key, cancelable: true }));
  }

  it('arrow keys move the selection, enter fills the input', async () => {
    const t = await withDropdown();
    press(t.input, 'ArrowDown');
    press(t.input, 'ArrowDown');
    const selected = t.list.querySelectorAll('li')[1];
    expect(selected.getAttribute('aria-selected')).toBe('true');
    press(t.input, 'Enter');
    expect(t.input.value).toBe('george floyd');
    expect(t.list.hidden).toBe(true);
    // filling the input must not trigger a new request
    vi.advanceTimersByTime(300);
    expect(t.fetchFn).toHaveBeenCalledTimes(1);
  });

  it('click selects an item', async () => {
    const t = await withDropdown();
    const third = t.list.querySelectorAll('li')[2];
    third.dispatchEvent(new MouseEvent('mousedown', { cancelable: true }));
    expect(t.input.value).toBe('georgia');
  });

  it('escape closes the dropdown and keeps the input', async () => {
    const t = await withDropdown();
    press(t.input, 'Escape');
    expect(t.list.hidden).toBe(true);
    expect(t.input.value).toBe('ge');
  });

  it('arrow up wraps to the last item', async () => {
    const t = await withDropdown();
    press(t.input, 'ArrowUp');
    const last = t.list.querySelectorAll('li')[2];
    expect(last.getAttribute('aria-selected')).toBe('true');
  });
});
