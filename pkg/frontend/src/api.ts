// HTTP client for the verification service. At most one verify request is
// in flight per client: a new submission aborts the previous one.

import { ErrorEnvelopeSchema, parseVerifyResponse, VerifyResponse } from './schema.js';

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = 'ApiError';
  }

  get retryable(): boolean {
    return this.status === 503 || this.status === 502;
  }
}

export class ApiClient {
  private controller: AbortController | null = null;

  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  async verify(text: string, topK?: number): Promise<VerifyResponse> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;

    const body: Record<string, unknown> = { text };
    if (topK !== undefined) body['top_k'] = topK;

    const response = await this.fetchFn(`${this.baseUrl}/api/verify`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
      signal: controller.signal,
    });
    if (this.controller === controller) this.controller = null;

    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const envelope = ErrorEnvelopeSchema.safeParse(payload);
      if (envelope.success) {
        throw new ApiError(envelope.data.error.code, envelope.data.error.message, response.status);
      }
      throw new ApiError('http_error', `request failed with HTTP ${response.status}`, response.status);
    }
    return parseVerifyResponse(payload);
  }

  cancel(): void {
    this.controller?.abort();
    this.controller = null;
  }
}
