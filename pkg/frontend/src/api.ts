/**
 * Typed client for the what-if service's /v1 REST API. Pure fetch wrappers:
 * errors carry the server's validation report when one is present.
 */

export interface SpecResponse {
  revision: string;
  document: any;
}

export interface WhatIfResponse {
  revision: string;
  weights: Record<string, number>;
  rows: Array<{
    configuration: Record<string, string>;
    distribution: number[];
    modes: number[];
    mode_labels: string[];
    competing_modes: number[];
    hull: { member: boolean; residual: number; weights: number[] };
  }>;
}

export interface CommitResponse {
  revision: string;
}

export interface ServiceViolation {
  code: string;
  where: string;
  message: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public errors: ServiceViolation[],
    public revision?: string,
  ) {
    super(
      errors.length > 0
        ? errors.map((e) => `[${e.code}] ${e.where}: ${e.message}`).join("; ")
        : `request failed with status ${status}`,
    );
  }
}

export class TunerApi {
  constructor(public baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}/v1${path}`;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.url(path), {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, body.errors ?? [], body.revision);
    }
    return body as T;
  }

  getSpec(): Promise<SpecResponse> {
    return this.request<SpecResponse>("/spec");
  }

  whatIf(body: unknown): Promise<WhatIfResponse> {
    return this.request<WhatIfResponse>("/whatif", {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  commit(body: unknown): Promise<CommitResponse> {
    return this.request<CommitResponse>("/commit", {
      method: "POST",
      body: JSON.stringify(body),
    });
  }
}
