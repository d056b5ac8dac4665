// Wire schema of the verification service. Every field the UI touches is
// validated here; unknown extra fields are ignored (zod strips them), so
// server-side additions never break rendering.

import { z } from 'zod';

export const VERACITY_LABELS = ['True', 'False', 'Unverifiable'] as const;
export type VeracityLabel = (typeof VERACITY_LABELS)[number];

export const FactCheckSchema = z.object({
  id: z.string(),
  claim_text: z.string(),
  claim_english: z.string().nullish(),
  language: z.string(),
  published_date: z.string().nullish(),
  organization: z.string().nullish(),
  rating_raw: z.string().optional().default(''),
  rating: z.string(),
  article_url: z.string().nullish(),
});

export const RelevantEntrySchema = z.object({
  factcheck: FactCheckSchema,
  summary: z.string(),
  relevance_explanation: z.string(),
});

export const IrrelevantEntrySchema = z.object({
  factcheck: FactCheckSchema,
  score: z.number(),
});

export const VerdictSchema = z.object({
  label: z.string(),
  explanation: z.string(),
  distribution: z.record(z.string(), z.number().int().nonnegative()),
  parse_warning: z.boolean().optional().default(false),
});

export const VerifyResponseSchema = z.object({
  relevant: z.array(RelevantEntrySchema),
  irrelevant: z.array(IrrelevantEntrySchema),
  verdict: VerdictSchema,
  overall_summary: z.string(),
  timing: z.record(z.string(), z.number()),
  degraded: z.boolean().optional().default(false),
  warnings: z.array(z.string()).optional().default([]),
});

export const ErrorEnvelopeSchema = z.object({
  error: z.object({ code: z.string(), message: z.string() }),
});

export type FactCheck = z.infer<typeof FactCheckSchema>;
export type RelevantEntry = z.infer<typeof RelevantEntrySchema>;
export type IrrelevantEntry = z.infer<typeof IrrelevantEntrySchema>;
export type Verdict = z.infer<typeof VerdictSchema>;
export type VerifyResponse = z.infer<typeof VerifyResponseSchema>;

export function parseVerifyResponse(payload: unknown): VerifyResponse {
  return VerifyResponseSchema.parse(payload);
}
