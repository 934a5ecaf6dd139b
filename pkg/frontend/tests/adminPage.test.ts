// Admin console flows against the wire-faithful stub: signup, login,
// template creation with scope conflicts surfaced verbatim, client
// registration with one-time secret display.

import { beforeEach, describe, expect, it } from 'vitest';

import { BridgeApi } from '../src/api.js';
import { renderAdminPage } from '../src/adminPage.js';
import { clearAdminToken, getAdminToken } from '../src/session.js';
import { stubAdminBridge } from './stubBridge.js';

const PASSWORD = 'correct-horse-battery-staple';

function setInput(form: HTMLElement, name: string, value: string): void {
  form.querySelector<HTMLInputElement>(`[name="${name}"]`)!.value = value;
}

function submit(root: HTMLElement, selector: string): Promise<void> {
  root.querySelector<HTMLFormElement>(selector)!
    .dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
  // handlers are async; give the microtask queue a couple of turns
  return new Promise((resolve) => setTimeout(resolve, 0));
}

async function signupAndLogin(page: HTMLElement, deps: { api: BridgeApi }) {
  await renderAdminPage(page, deps);
  setInput(page.querySelector('#signup-form')!, 'display_name', 'Acme Bank');
  setInput(page.querySelector('#signup-form')!, 'password', PASSWORD);
  await submit(page, '#signup-form');
  setInput(page.querySelector('#login-form')!, 'display_name', 'Acme Bank');
  setInput(page.querySelector('#login-form')!, 'password', PASSWORD);
  await submit(page, '#login-form');
  await new Promise((resolve) => setTimeout(resolve, 0));
}

function fillTemplateForm(page: HTMLElement, scope: string): void {
  const form = page.querySelector<HTMLElement>('#template-form')!;
  setInput(form, 'name', 'Identity check');
  setInput(form, 'scopes', scope);
  setInput(form, 'subject_claim', 'documentNumber');
  const eudi = form.querySelector<HTMLElement>('.eco-config[data-ecosystem="eudi"]')!;
  eudi.querySelector<HTMLInputElement>('.eco-enabled')!.checked = true;
  eudi.querySelector<HTMLInputElement>('.eco-attributes')!.value =
    'documentNumber, givenName';
  eudi.querySelector<HTMLInputElement>('.eco-issuers')!.value = 'did:sim:gov';
  eudi.querySelector<HTMLInputElement>('.eco-type')!.value = 'PID';
}

let page: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '';
  clearAdminToken();
  page = document.createElement('div');
  document.body.appendChild(page);
});

describe('signup and login', () => {
  it('wrong password shows a generic unauthorized message', async () => {
    const stub = stubAdminBridge();
    const deps = { api: new BridgeApi('https://bridge.example', stub.fetchImpl) };
    await renderAdminPage(page, deps);
    setInput(page.querySelector('#signup-form')!, 'display_name', 'Acme Bank');
    setInput(page.querySelector('#signup-form')!, 'password', PASSWORD);
    await submit(page, '#signup-form');

    setInput(page.querySelector('#login-form')!, 'display_name', 'Acme Bank');
    setInput(page.querySelector('#login-form')!, 'password', 'wrong-password-1');
    await submit(page, '#login-form');
    expect(page.querySelector('#login-error')!.textContent).toBe('unauthorized');
    expect(getAdminToken()).toBeNull();
  });

  it('successful login stores the token in session scope, never the URL', async () => {
    const stub = stubAdminBridge();
    const deps = { api: new BridgeApi('https://bridge.example', stub.fetchImpl) };
    await signupAndLogin(page, deps);
    expect(page.querySelector('.console-header')).toBeTruthy();
    const token = getAdminToken();
    expect(token).toBeTruthy();
    expect(window.location.href).not.toContain(token!);
  });
});

describe('template management', () => {
  it('creates a template and lists it', async () => {
    const stub = stubAdminBridge();
    const deps = { api: new BridgeApi('https://bridge.example', stub.fetchImpl) };
    await signupAndLogin(page, deps);
    fillTemplateForm(page, 'government_identity');
    await submit(page, '#template-form');
    const items = page.querySelectorAll('.template-item');
    expect(items).toHaveLength(1);
    expect(items[0].textContent).toContain('government_identity');
    expect(items[0].textContent).toContain('eudi');
  });

  it('surfaces a duplicate-scope conflict verbatim', async () => {
    const stub = stubAdminBridge();
    const deps = { api: new BridgeApi('https://bridge.example', stub.fetchImpl) };
    await signupAndLogin(page, deps);
    fillTemplateForm(page, 'government_identity');
    await submit(page, '#template-form');
    fillTemplateForm(page, 'government_identity');
    await submit(page, '#template-form');
    const message = page.querySelector('#template-error')!.textContent!;
    expect(message).toContain('scope_conflict');
    expect(message).toContain("'government_identity' already bound");
  });
});

describe('client registration', () => {
  async function registerClient(deps: { api: BridgeApi }) {
    await signupAndLogin(page, deps);
    const form = page.querySelector<HTMLElement>('#client-form')!;
    setInput(form, 'redirect_uris', 'https://rp.example/cb');
    setInput(form, 'allowed_scopes', 'government_identity');
    await submit(page, '#client-form');
  }

  it('shows the one-time secret with a copy affordance', async () => {
    const stub = stubAdminBridge();
    const deps = { api: new BridgeApi('https://bridge.example', stub.fetchImpl) };
    await registerClient(deps);
    const box = page.querySelector<HTMLElement>('#secret-box')!;
    expect(box.hidden).toBe(false);
    expect(page.querySelector('#secret-value')!.textContent).toMatch(/^sec_/);
    expect(page.querySelector('#copy-secret')).toBeTruthy();
  });

  it('secret is absent after a reload: listings never repeat it', async () => {
    const stub = stubAdminBridge();
    const deps = { api: new BridgeApi('https://bridge.example', stub.fetchImpl) };
    await registerClient(deps);
    const secret = page.querySelector('#secret-value')!.textContent!;

    // Simulate a reload: fresh render from the stored session token.
    await renderAdminPage(page, deps);
    expect(page.querySelector<HTMLElement>('#secret-box')!.hidden).toBe(true);
    expect(page.querySelector('#secret-value')!.textContent).toBe('');
    expect(page.innerHTML).not.toContain(secret);
    // The client itself is still listed.
    expect(page.querySelectorAll('.client-item')).toHaveLength(1);
  });
});
