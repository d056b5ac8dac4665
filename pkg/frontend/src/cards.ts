// Card rendering for retrieved fact-checks. Only fields present in the
// response are rendered; optional metadata lines disappear rather than
// showing placeholders.

import { FactCheck, IrrelevantEntry, RelevantEntry } from './schema.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function claimOf(fc: FactCheck): string {
  return fc.claim_english || fc.claim_text;
}

export function ratingBadge(rating: string): HTMLElement {
  const badge = el('span', `rating-badge rating-${rating.toLowerCase()}`, rating);
  badge.dataset['rating'] = rating;
  return badge;
}

export function relevantCard(entry: RelevantEntry): HTMLElement {
  const fc = entry.factcheck;
  const card = el('article', 'card relevant-card');
  card.dataset['factcheckId'] = fc.id;

  const header = el('header', 'card-header');
  header.append(ratingBadge(fc.rating), el('h3', 'card-claim', claimOf(fc)));
  card.append(header);

  const meta: string[] = [];
  if (fc.organization) meta.push(fc.organization);
  if (fc.published_date) meta.push(fc.published_date);
  if (meta.length) card.append(el('p', 'card-meta', meta.join(' · ')));

  if (entry.summary) {
    const summary = el('p', 'card-summary', entry.summary);
    card.append(summary);
  }
  if (entry.relevance_explanation) {
    card.append(el('p', 'card-explanation', `Why relevant: ${entry.relevance_explanation}`));
  }
  if (fc.article_url) {
    const link = el('a', 'card-link', 'Read the fact-check');
    link.href = fc.article_url;
    link.target = '_blank';
    link.rel = 'noopener';
    card.append(link);
  }
  return card;
}

export function irrelevantRow(entry: IrrelevantEntry): HTMLElement {
  const row = el('li', 'irrelevant-row');
  row.dataset['factcheckId'] = entry.factcheck.id;
  row.append(
    el('span', 'irrelevant-claim', claimOf(entry.factcheck)),
    el('span', 'irrelevant-score', entry.score.toFixed(3)),
  );
  return row;
}

export function irrelevantList(entries: IrrelevantEntry[]): HTMLUListElement {
  const list = el('ul', 'irrelevant-list');
  for (const entry of entries) list.append(irrelevantRow(entry));
  return list;
}
