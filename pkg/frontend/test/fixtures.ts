// Canned service responses used by the mocked-API tests.

export function cannedResponse() {
  return {
    relevant: [
      {
        factcheck: {
          id: 'fc-1',
          claim_text: 'A video shows a shark on a flooded highway.',
          claim_english: 'A video shows a shark on a flooded highway.',
          language: 'en',
          published_date: '2022-10-03',
          organization: 'AFP',
          rating_raw: 'false',
          rating: 'False',
          article_url: 'https://factcheck.example/fc-1',
        },
        summary: 'The shark footage is a composite that resurfaces after storms.',
        relevance_explanation: 'Same viral shark video.',
      },
      {
        factcheck: {
          id: 'fc-2',
          claim_text: 'The same video circulated in 2017.',
          claim_english: 'The same video circulated in 2017.',
          language: 'en',
          published_date: null,
          organization: null,
          rating_raw: 'false',
          rating: 'False',
          article_url: null,
        },
        summary: '',
        relevance_explanation: '',
      },
    ],
    irrelevant: [
      {
        factcheck: {
          id: 'fc-3',
          claim_text: 'Hot lemon water cures infections.',
          claim_english: null,
          language: 'en',
          published_date: '2021-02-14',
          organization: 'AFP',
          rating_raw: 'misleading',
          rating: 'False',
          article_url: null,
        },
        score: 0.412,
      },
      {
        factcheck: {
          id: 'fc-4',
          claim_text: 'A banknote contains a tracking chip.',
          claim_english: null,
          language: 'es',
          published_date: null,
          organization: 'AFP Factual',
          rating_raw: 'false',
          rating: 'False',
          article_url: null,
        },
        score: 0.173,
      },
    ],
    verdict: {
      label: 'False',
      explanation: 'Both relevant fact-checks debunk the video.',
      distribution: { True: 0, False: 2, Unverifiable: 0 },
      parse_warning: false,
    },
    overall_summary: 'The post repeats a debunked shark video claim.',
    timing: { retrieve_ms: 3.2, filter_ms: 140.5, summarize_ms: 220.9, verdict_ms: 95.1 },
    degraded: false,
    warnings: [],
  };
}

export function degradedResponse() {
  const base = cannedResponse();
  return {
    ...base,
    relevant: [],
    verdict: {
      label: 'Unverifiable',
      explanation: '',
      distribution: {},
      parse_warning: false,
    },
    overall_summary: '',
    degraded: true,
  };
}
