// Typed client over the bridge's wire formats. Every response shape here
// mirrors the backend's JSON exactly; errors arrive as
// {error, error_description} and surface as ApiError.

export interface TemplateSummary {
  name: string;
  ecosystems: string[];
}

export interface AuthContext {
  session_id: string;
  correlation_id: string;
  template: TemplateSummary;
  expires_at: number;
}

export interface PresentationRequestWire {
  correlation_id: string;
  ecosystem: string;
  challenge_nonce: string;
  requested_attributes: string[];
  trusted_issuers: string[];
  credential_type: string;
  expires_at: number;
  deep_link: string;
}

export interface RedirectPayload {
  redirect_uri: string;
  code: string;
  state: string;
}

export interface StatusResponse {
  status: 'pending' | 'verified' | 'failed';
  redirect?: RedirectPayload;
  reason?: string;
}

export interface ClaimMappingWire {
  source_attribute: string;
  target_claim: string;
  required: boolean;
}

export interface EcosystemConfigWire {
  requested_attributes: string[];
  trusted_issuers: string[];
  credential_type: string;
}

export interface TemplateWire {
  template_id: string;
  tenant_id: string;
  name: string;
  scopes: string[];
  is_auth_only: boolean;
  subject_claim: string;
  claim_mappings: ClaimMappingWire[];
  ecosystem_configs: Record<string, EcosystemConfigWire>;
  created_at: number;
}

export interface ClientWire {
  client_id: string;
  client_type: 'confidential' | 'public';
  kind: 'oidc' | 'api';
  tenant_id: string;
  redirect_uris: string[];
  allowed_scopes: string[];
  created_at: number;
  client_secret?: string; // present only in the registration response
}

export class ApiError extends Error {
  constructor(
    public readonly error: string,
    public readonly description: string,
    public readonly status: number,
  ) {
    super(`${error}: ${description}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let error = `http_${response.status}`;
  let description = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.error === 'string') {
      error = body.error;
      description = body.error_description ?? '';
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(error, description, response.status);
}

export class BridgeApi {
  constructor(
    private readonly baseUrl = '',
    private readonly fetchImpl: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request<T>(
    path: string,
    init: RequestInit = {},
    token?: string,
  ): Promise<T> {
    const headers: Record<string, string> = {
      ...(init.body ? { 'Content-Type': 'application/json' } : {}),
      ...(token ? { Authorization: `Bearer ${token}` } : {}),
    };
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      ...init,
      headers,
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  // auth flow
  authContext(authToken: string): Promise<AuthContext> {
    return this.request(`/auth/context?token=${encodeURIComponent(authToken)}`);
  }

  status(sessionId: string): Promise<StatusResponse> {
    return this.request(`/auth/status/${encodeURIComponent(sessionId)}`);
  }

  presentationRequest(
    correlationId: string,
    ecosystem: string,
  ): Promise<PresentationRequestWire> {
    return this.request(
      `/verify/request/${encodeURIComponent(correlationId)}` +
        `?ecosystem=${encodeURIComponent(ecosystem)}`,
    );
  }

  // admin console
  registerTenant(displayName: string, adminPassword: string): Promise<{ tenant_id: string }> {
    return this.request('/admin/tenants', {
      method: 'POST',
      body: JSON.stringify({ display_name: displayName, admin_password: adminPassword }),
    });
  }

  login(displayName: string, adminPassword: string): Promise<{ token: string; tenant_id: string; expires_at: number }> {
    return this.request('/admin/login', {
      method: 'POST',
      body: JSON.stringify({ display_name: displayName, admin_password: adminPassword }),
    });
  }

  listTemplates(token: string): Promise<{ templates: TemplateWire[]; total: number }> {
    return this.request('/admin/templates', {}, token);
  }

  createTemplate(token: string, body: unknown): Promise<TemplateWire> {
    return this.request('/admin/templates', { method: 'POST', body: JSON.stringify(body) }, token);
  }

  listClients(token: string): Promise<{ clients: ClientWire[] }> {
    return this.request('/admin/clients', {}, token);
  }

  registerClient(token: string, body: unknown): Promise<ClientWire> {
    return this.request('/admin/clients', { method: 'POST', body: JSON.stringify(body) }, token);
  }
}
