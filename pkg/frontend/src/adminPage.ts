// Tenant admin console: signup, login, proof-template creation with scope
// and claim-mapping editors, and client registration with one-time secret
// display. Every mutation round-trips through the admin API; the page keeps
// no state of record beyond the session token.

import { ApiError, BridgeApi, ClientWire } from './api.js';
import { clearAdminToken, getAdminToken, setAdminToken } from './session.js';

export interface AdminPageDeps {
  api: BridgeApi;
}

const ECOSYSTEMS = ['aries', 'ebsi', 'eudi'] as const;

function showError(container: HTMLElement, selector: string, err: unknown): void {
  const target = container.querySelector<HTMLElement>(selector);
  if (!target) return;
  if (err instanceof ApiError) {
    // Surface the API's own error code verbatim; no rewording.
    target.textContent = err.error === 'unauthorized'
      ? 'unauthorized'
      : `${err.error}: ${err.description}`;
  } else {
    target.textContent = 'request failed';
  }
}

function loginForms(): string {
  return `
    <section class="signup-card">
      <h2>Create a tenant</h2>
      <form id="signup-form">
        <input name="display_name" placeholder="Organization name" required />
        <input name="password" type="password" placeholder="Admin password (min 12 chars)" required />
        <button type="submit">Register</button>
        <p id="signup-error" class="error-msg" aria-live="polite"></p>
      </form>
    </section>
    <section class="login-card">
      <h2>Sign in</h2>
      <form id="login-form">
        <input name="display_name" placeholder="Organization name" required />
        <input name="password" type="password" placeholder="Admin password" required />
        <button type="submit">Sign in</button>
        <p id="login-error" class="error-msg" aria-live="polite"></p>
      </form>
    </section>
  `;
}

function consoleSkeleton(): string {
  return `
    <header class="console-header">
      <h1>Tenant console</h1>
      <button id="logout">Sign out</button>
    </header>
    <section class="templates-card">
      <h2>Proof templates</h2>
      <ul id="template-list"></ul>
      <form id="template-form">
        <input name="name" placeholder="Template name" required />
        <input name="scopes" placeholder="Scopes (comma separated)" required />
        <input name="subject_claim" placeholder="Subject attribute" required />
        <label><input name="is_auth_only" type="checkbox" checked /> Authentication-only</label>
        <div id="mapping-rows"></div>
        <button type="button" id="add-mapping">Add claim mapping</button>
        <div id="ecosystem-rows">
          ${ECOSYSTEMS.map((eco) => `
            <fieldset class="eco-config" data-ecosystem="${eco}">
              <label><input type="checkbox" class="eco-enabled" /> ${eco}</label>
              <input class="eco-attributes" placeholder="Requested attributes (csv)" />
              <input class="eco-issuers" placeholder="Trusted issuers (csv)" />
              <input class="eco-type" placeholder="Credential type" />
            </fieldset>`).join('')}
        </div>
        <button type="submit">Create template</button>
        <p id="template-error" class="error-msg" aria-live="polite"></p>
      </form>
    </section>
    <section class="clients-card">
      <h2>Clients</h2>
      <ul id="client-list"></ul>
      <form id="client-form">
        <select name="client_type">
          <option value="confidential">confidential</option>
          <option value="public">public</option>
        </select>
        <input name="redirect_uris" placeholder="Redirect URIs (csv)" required />
        <input name="allowed_scopes" placeholder="Allowed scopes (csv)" required />
        <button type="submit">Register client</button>
        <p id="client-error" class="error-msg" aria-live="polite"></p>
      </form>
      <div id="secret-box" hidden>
        <p>Client secret (copy it now; it is shown exactly once):</p>
        <code id="secret-value"></code>
        <button id="copy-secret" type="button">Copy</button>
      </div>
    </section>
  `;
}

function csv(value: string): string[] {
  return value.split(',').map((s) => s.trim()).filter(Boolean);
}

function mappingRow(doc: Document): HTMLElement {
  const row = doc.createElement('div');
  row.className = 'mapping-row';
  row.innerHTML = `
    <input class="map-source" placeholder="Credential attribute" />
    <input class="map-target" placeholder="Token claim" />
    <label><input class="map-required" type="checkbox" checked /> required</label>
  `;
  return row;
}

async function refreshTemplates(container: HTMLElement, api: BridgeApi, token: string): Promise<void> {
  const list = container.querySelector<HTMLElement>('#template-list')!;
  const page = await api.listTemplates(token);
  list.innerHTML = '';
  for (const template of page.templates) {
    const item = container.ownerDocument.createElement('li');
    item.className = 'template-item';
    item.dataset.templateId = template.template_id;
    item.textContent =
      `${template.name} — scopes: ${template.scopes.join(', ')} — ` +
      `ecosystems: ${Object.keys(template.ecosystem_configs).sort().join(', ')}`;
    list.appendChild(item);
  }
}

async function refreshClients(container: HTMLElement, api: BridgeApi, token: string): Promise<void> {
  const list = container.querySelector<HTMLElement>('#client-list')!;
  const { clients } = await api.listClients(token);
  list.innerHTML = '';
  for (const client of clients) {
    const item = container.ownerDocument.createElement('li');
    item.className = 'client-item';
    item.textContent = `${client.client_id} (${client.client_type}, ` +
      `scopes: ${client.allowed_scopes.join(', ')})`;
    list.appendChild(item);
  }
}

function templateBody(form: HTMLFormElement): unknown {
  const data = new FormData(form);
  const mappings = Array.from(form.querySelectorAll('.mapping-row'))
    .map((row) => ({
      source_attribute: row.querySelector<HTMLInputElement>('.map-source')!.value.trim(),
      target_claim: row.querySelector<HTMLInputElement>('.map-target')!.value.trim(),
      required: row.querySelector<HTMLInputElement>('.map-required')!.checked,
    }))
    .filter((m) => m.source_attribute && m.target_claim);
  const configs: Record<string, unknown> = {};
  for (const fieldset of form.querySelectorAll<HTMLElement>('.eco-config')) {
    if (!fieldset.querySelector<HTMLInputElement>('.eco-enabled')!.checked) continue;
    configs[fieldset.dataset.ecosystem!] = {
      requested_attributes: csv(fieldset.querySelector<HTMLInputElement>('.eco-attributes')!.value),
      trusted_issuers: csv(fieldset.querySelector<HTMLInputElement>('.eco-issuers')!.value),
      credential_type: fieldset.querySelector<HTMLInputElement>('.eco-type')!.value.trim(),
    };
  }
  return {
    name: data.get('name'),
    scopes: csv(String(data.get('scopes'))),
    subject_claim: data.get('subject_claim'),
    is_auth_only: form.querySelector<HTMLInputElement>('[name=is_auth_only]')!.checked,
    claim_mappings: mappings,
    ecosystem_configs: configs,
  };
}

async function renderConsole(container: HTMLElement, deps: AdminPageDeps, token: string): Promise<void> {
  container.innerHTML = consoleSkeleton();
  const doc = container.ownerDocument;

  container.querySelector<HTMLElement>('#logout')!.addEventListener('click', () => {
    clearAdminToken();
    void renderAdminPage(container, deps);
  });

  container.querySelector<HTMLElement>('#add-mapping')!.addEventListener('click', () => {
    container.querySelector<HTMLElement>('#mapping-rows')!.appendChild(mappingRow(doc));
  });

  const templateForm = container.querySelector<HTMLFormElement>('#template-form')!;
  templateForm.addEventListener('submit', (event) => {
    event.preventDefault();
    void (async () => {
      try {
        await deps.api.createTemplate(token, templateBody(templateForm));
        await refreshTemplates(container, deps.api, token);
        templateForm.reset();
      } catch (err) {
        showError(container, '#template-error', err);
      }
    })();
  });

  const clientForm = container.querySelector<HTMLFormElement>('#client-form')!;
  clientForm.addEventListener('submit', (event) => {
    event.preventDefault();
    void (async () => {
      const data = new FormData(clientForm);
      try {
        const created = await deps.api.registerClient(token, {
          kind: 'oidc',
          client_type: data.get('client_type'),
          redirect_uris: csv(String(data.get('redirect_uris'))),
          allowed_scopes: csv(String(data.get('allowed_scopes'))),
        });
        await refreshClients(container, deps.api, token);
        showSecretOnce(container, created);
      } catch (err) {
        showError(container, '#client-error', err);
      }
    })();
  });

  await refreshTemplates(container, deps.api, token);
  await refreshClients(container, deps.api, token);
}

function showSecretOnce(container: HTMLElement, client: ClientWire): void {
  const box = container.querySelector<HTMLElement>('#secret-box')!;
  const value = container.querySelector<HTMLElement>('#secret-value')!;
  if (client.client_secret) {
    value.textContent = client.client_secret;
    box.hidden = false;
    container.querySelector<HTMLElement>('#copy-secret')!
      .addEventListener('click', () => {
        void navigator.clipboard?.writeText(client.client_secret!);
      }, { once: true });
  } else {
    box.hidden = true;
    value.textContent = '';
  }
}

export async function renderAdminPage(container: HTMLElement, deps: AdminPageDeps): Promise<void> {
  const token = getAdminToken();
  if (token) {
    try {
      await renderConsole(container, deps, token);
      return;
    } catch {
      clearAdminToken(); // stale token: fall through to the login forms
    }
  }

  container.innerHTML = loginForms();

  container.querySelector<HTMLFormElement>('#signup-form')!
    .addEventListener('submit', (event) => {
      event.preventDefault();
      const form = event.target as HTMLFormElement;
      const data = new FormData(form);
      void deps.api
        .registerTenant(String(data.get('display_name')), String(data.get('password')))
        .then(() => {
          form.querySelector<HTMLElement>('#signup-error')!.textContent =
            'Tenant created. Sign in below.';
        })
        .catch((err) => showError(container, '#signup-error', err));
    });

  container.querySelector<HTMLFormElement>('#login-form')!
    .addEventListener('submit', (event) => {
      event.preventDefault();
      const data = new FormData(event.target as HTMLFormElement);
      void deps.api
        .login(String(data.get('display_name')), String(data.get('password')))
        .then((session) => {
          setAdminToken(session.token);
          return renderConsole(container, deps, session.token);
        })
        .catch((err) => showError(container, '#login-error', err));
    });
}
