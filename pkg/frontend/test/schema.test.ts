import { describe, expect, it } from 'vitest';

import { parseVerifyResponse, VerifyResponseSchema } from '../src/schema.js';
import { cannedResponse } from './fixtures.js';

describe('VerifyResponse schema', () => {
  it('accepts a canned response', () => {
    const parsed = parseVerifyResponse(cannedResponse());
    expect(parsed.relevant).toHaveLength(2);
    expect(parsed.verdict.label).toBe('False');
  });

  it('ignores unknown extra fields', () => {
    const payload = {
      ...cannedResponse(),
      server_extra: 'future field',
      verdict: { ...cannedResponse().verdict, confidence: 0.93 },
    };
    const parsed = parseVerifyResponse(payload) as Record<string, unknown>;
    expect(parsed['server_extra']).toBeUndefined();
    expect((parsed['verdict'] as Record<string, unknown>)['confidence']).toBeUndefined();
  });

  it('rejects a response missing required fields', () => {
    const broken = cannedResponse() as Record<string, unknown>;
    delete broken['verdict'];
    expect(() => parseVerifyResponse(broken)).toThrow();
  });

  it('rejects malformed distribution counts', () => {
    const broken = cannedResponse() as unknown as {
      verdict: { distribution: Record<string, number> };
    };
    broken.verdict.distribution = { False: -1 };
    expect(VerifyResponseSchema.safeParse(broken).success).toBe(false);
  });

  it('defaults optional flags', () => {
    const minimal = cannedResponse() as Record<string, unknown>;
    delete minimal['degraded'];
    delete minimal['warnings'];
    const parsed = parseVerifyResponse(minimal);
    expect(parsed.degraded).toBe(false);
    expect(parsed.warnings).toEqual([]);
  });
});
