// Wallet-selection page: the human side of the verification leg. Renders
// one choice per ecosystem the template supports, invokes the wallet via
// deep link (same device) or QR (cross device), polls verification status,
// and finally sends the browser to the relying party's callback.

import { ApiError, BridgeApi, AuthContext } from './api.js';
import { PollBackoff } from './backoff.js';
import { renderQr } from './qr.js';

export interface AuthPageDeps {
  api: BridgeApi;
  navigate: (url: string) => void;
  sleep: (ms: number) => Promise<void>;
  backoff?: PollBackoff;
}

export type Mode = 'same_device' | 'cross_device';

const FAILURE_TEXT: Record<string, string> = {
  bad_signature: 'The presentation signature did not verify.',
  nonce_mismatch: 'The presentation did not answer this verification request.',
  nonce_replayed: 'This presentation was already used once.',
  untrusted_issuer: 'The credential comes from an issuer this service does not trust.',
  expired_credential: 'The credential has expired.',
  revoked: 'The credential has been revoked.',
  missing_attribute: 'The presentation is missing a required attribute.',
  claims_unsatisfied: 'The verified attributes do not satisfy this request.',
};

function errorPage(container: HTMLElement, message: string): void {
  container.innerHTML = `
    <div class="auth-error">
      <h1>Sign-in can't continue</h1>
      <p class="error-msg">${message}</p>
      <p>Go back to the application and start signing in again.</p>
    </div>
  `;
}

export function buildCallbackUrl(redirectUri: string, code: string, state: string): string {
  const query = new URLSearchParams({ code, state });
  return `${redirectUri}?${query.toString()}`;
}

export async function pollAndRedirect(
  sessionId: string,
  container: HTMLElement,
  deps: AuthPageDeps,
): Promise<'verified' | 'failed'> {
  const backoff = deps.backoff ?? new PollBackoff();
  const statusLine = container.querySelector<HTMLElement>('#status-line');
  for (;;) {
    let status;
    try {
      status = await deps.api.status(sessionId);
      backoff.recordSuccess();
    } catch (err) {
      if (err instanceof ApiError) {
        errorPage(container, 'This sign-in session has expired.');
        return 'failed';
      }
      backoff.recordFailure(); // network trouble: retry, twice as patient
      await deps.sleep(backoff.intervalMs());
      continue;
    }
    if (status.status === 'verified' && status.redirect) {
      deps.navigate(buildCallbackUrl(
        status.redirect.redirect_uri,
        status.redirect.code,
        status.redirect.state,
      ));
      return 'verified';
    }
    if (status.status === 'failed') {
      const text = FAILURE_TEXT[status.reason ?? ''] ?? 'Verification failed.';
      errorPage(container, text);
      return 'failed';
    }
    if (statusLine) statusLine.textContent = 'Waiting for your wallet…';
    await deps.sleep(backoff.intervalMs());
  }
}

function renderInvocation(
  container: HTMLElement,
  deepLink: string,
  mode: Mode,
): void {
  const area = container.querySelector<HTMLElement>('#invoke-area')!;
  if (mode === 'same_device') {
    area.innerHTML = '';
    const anchor = container.ownerDocument.createElement('a');
    anchor.className = 'deep-link btn btn-primary';
    anchor.href = deepLink;
    anchor.textContent = 'Open your wallet';
    area.appendChild(anchor);
  } else {
    renderQr(area, deepLink);
    const hint = container.ownerDocument.createElement('p');
    hint.className = 'muted';
    hint.textContent = 'Scan with the device that holds your wallet.';
    area.appendChild(hint);
  }
}

export interface WalletSelectionHandle {
  context?: AuthContext;
  // Resolves with the flow outcome once verification settles (or undefined
  // if the presentation request itself could not be prepared).
  selectEcosystem?: (ecosystem: string) => Promise<'verified' | 'failed' | undefined>;
}

export async function renderWalletSelection(
  container: HTMLElement,
  authToken: string,
  deps: AuthPageDeps,
): Promise<WalletSelectionHandle> {
  let context: AuthContext;
  try {
    context = await deps.api.authContext(authToken);
  } catch (err) {
    const reason = err instanceof ApiError && err.status === 401
      ? 'Your sign-in link has expired.'
      : 'Could not load this sign-in request.';
    errorPage(container, reason);
    return {};
  }

  container.innerHTML = `
    <div class="auth-page">
      <h1>Verify with ${context.template.name}</h1>
      <fieldset class="mode-toggle">
        <label><input type="radio" name="mode" value="same_device" checked />
          Wallet on this device</label>
        <label><input type="radio" name="mode" value="cross_device" />
          Scan a QR with another device</label>
      </fieldset>
      <div class="ecosystems"></div>
      <div id="invoke-area"></div>
      <p id="status-line" class="muted"></p>
    </div>
  `;

  const ecosystems = container.querySelector<HTMLElement>('.ecosystems')!;
  for (const ecosystem of context.template.ecosystems) {
    const button = container.ownerDocument.createElement('button');
    button.className = 'ecosystem-option';
    button.dataset.ecosystem = ecosystem;
    button.textContent = ecosystem;
    ecosystems.appendChild(button);
  }

  let polling: Promise<'verified' | 'failed'> | undefined;

  const selectEcosystem = async (ecosystem: string) => {
    const mode = container.querySelector<HTMLInputElement>(
      'input[name="mode"]:checked')!.value as Mode;
    try {
      const request = await deps.api.presentationRequest(
        context.correlation_id, ecosystem);
      renderInvocation(container, request.deep_link, mode);
    } catch {
      errorPage(container, 'Could not prepare the verification request.');
      return undefined;
    }
    polling ??= pollAndRedirect(context.session_id, container, deps);
    return polling;
  };

  ecosystems.addEventListener('click', (event) => {
    const ecosystem = (event.target as HTMLElement).dataset?.ecosystem;
    if (ecosystem) void selectEcosystem(ecosystem);
  });

  return { context, selectEcosystem };
}
