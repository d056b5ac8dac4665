// Single-page review UI: text input, LLM-selected relevant fact-checks,
// the collapsible non-relevant remainder, and the verdict panel. The view
// is pure presentation of one VerifyResponse; it never computes verdicts
// or distributions itself.

import { ApiClient, ApiError } from './api.js';
import { irrelevantList, relevantCard } from './cards.js';
import { renderDistribution } from './chart.js';
import { VerifyResponse } from './schema.js';

const COLLAPSE_KEY = 'claimline.irrelevant.collapsed';

export class App {
  readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly storage: Storage;

  private input!: HTMLTextAreaElement;
  private submitButton!: HTMLButtonElement;
  private status!: HTMLElement;
  private results!: HTMLElement;

  lastResponse: VerifyResponse | null = null;

  constructor(root: HTMLElement, api: ApiClient, storage: Storage = window.sessionStorage) {
    this.root = root;
    this.api = api;
    this.storage = storage;
    this.mount();
  }

  private get collapsed(): boolean {
    return this.storage.getItem(COLLAPSE_KEY) !== 'open';
  }

  private set collapsed(value: boolean) {
    this.storage.setItem(COLLAPSE_KEY, value ? 'collapsed' : 'open');
  }

  private mount(): void {
    this.root.innerHTML = '';
    const form = document.createElement('form');
    form.className = 'query-form';
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.submit();
    });

    this.input = document.createElement('textarea');
    this.input.className = 'query-input';
    this.input.placeholder = 'Paste a claim or social media post to check…';
    this.input.rows = 3;

    this.submitButton = document.createElement('button');
    this.submitButton.type = 'submit';
    this.submitButton.className = 'query-submit';
    this.submitButton.textContent = 'Find fact-checks';

    this.status = document.createElement('div');
    this.status.className = 'status';

    this.results = document.createElement('div');
    this.results.className = 'results';

    form.append(this.input, this.submitButton);
    this.root.append(form, this.status, this.results);
  }

  async submit(): Promise<void> {
    const text = this.input.value.trim();
    if (!text) {
      // mirrors the server's empty_query rule without issuing a request
      this.setStatus('Enter a claim or post first.', 'validation');
      return;
    }
    this.setStatus('Checking…', 'loading');
    this.submitButton.disabled = true;
    try {
      const response = await this.api.verify(text);
      this.lastResponse = response;
      this.setStatus('', '');
      this.render(response);
    } catch (error) {
      if (error instanceof DOMException && error.name === 'AbortError') {
        return; // superseded by a newer submission
      }
      this.renderError(error);
    } finally {
      this.submitButton.disabled = false;
    }
  }

  toggleIrrelevant(): void {
    this.collapsed = !this.collapsed;
    const section = this.results.querySelector<HTMLElement>('.irrelevant-section');
    const toggle = this.results.querySelector<HTMLElement>('.irrelevant-toggle');
    if (section && toggle && this.lastResponse) {
      section.classList.toggle('collapsed', this.collapsed);
      toggle.textContent = this.toggleLabel(this.lastResponse.irrelevant.length);
    }
  }

  private toggleLabel(count: number): string {
    return `${this.collapsed ? 'Show' : 'Hide'} other retrieved fact-checks (${count})`;
  }

  private setStatus(message: string, kind: string): void {
    this.status.textContent = message;
    this.status.dataset['kind'] = kind;
  }

  private renderError(error: unknown): void {
    this.results.innerHTML = '';
    const box = document.createElement('div');
    box.className = 'error-box';
    const message = document.createElement('p');
    message.className = 'error-message';
    if (error instanceof ApiError) {
      message.textContent = `${error.message} (${error.code})`;
      box.append(message);
      if (error.retryable) {
        const retry = document.createElement('button');
        retry.type = 'button';
        retry.className = 'retry-button';
        retry.textContent = 'Retry';
        retry.addEventListener('click', () => void this.submit());
        box.append(retry);
      }
    } else {
      message.textContent = error instanceof Error ? error.message : String(error);
      box.append(message);
    }
    this.setStatus('', 'error');
    this.results.append(box);
  }

  render(response: VerifyResponse): void {
    this.results.innerHTML = '';

    if (response.degraded) {
      const banner = document.createElement('div');
      banner.className = 'degraded-banner';
      banner.setAttribute('role', 'alert');
      banner.textContent =
        'Language-model features are unavailable; showing retrieval results only.';
      this.results.append(banner);
    }

    // (2) relevant fact-checks selected by the model
    const relevantSection = document.createElement('section');
    relevantSection.className = 'relevant-section';
    const relevantTitle = document.createElement('h2');
    relevantTitle.textContent = `Relevant fact-checks (${response.relevant.length})`;
    relevantSection.append(relevantTitle);
    if (response.relevant.length === 0) {
      const none = document.createElement('p');
      none.className = 'relevant-empty';
      none.textContent = 'No retrieved fact-check was judged relevant.';
      relevantSection.append(none);
    }
    for (const entry of response.relevant) relevantSection.append(relevantCard(entry));
    this.results.append(relevantSection);

    // (3) the non-relevant remainder, collapsed by default
    const irrelevantSection = document.createElement('section');
    irrelevantSection.className = 'irrelevant-section';
    irrelevantSection.classList.toggle('collapsed', this.collapsed);
    const toggle = document.createElement('button');
    toggle.type = 'button';
    toggle.className = 'irrelevant-toggle';
    toggle.textContent = this.toggleLabel(response.irrelevant.length);
    toggle.addEventListener('click', () => this.toggleIrrelevant());
    irrelevantSection.append(toggle, irrelevantList(response.irrelevant));
    this.results.append(irrelevantSection);

    // (4) system response: verdict, distribution chart, overall summary
    const verdictSection = document.createElement('section');
    verdictSection.className = 'verdict-section';
    const verdictTitle = document.createElement('h2');
    verdictTitle.textContent = 'System response';
    const label = document.createElement('p');
    label.className = 'verdict-label';
    label.dataset['label'] = response.verdict.label;
    label.textContent = `Predicted veracity: ${response.verdict.label}`;
    verdictSection.append(verdictTitle, label);
    if (response.verdict.explanation) {
      verdictSection.append(
        Object.assign(document.createElement('p'), {
          className: 'verdict-explanation',
          textContent: response.verdict.explanation,
        }),
      );
    }
    verdictSection.append(renderDistribution(response.verdict));
    if (response.overall_summary) {
      verdictSection.append(
        Object.assign(document.createElement('p'), {
          className: 'overall-summary',
          textContent: response.overall_summary,
        }),
      );
    }
    this.results.append(verdictSection);
  }
}
