// Entry point for the auth page: the bridge redirects here with
// ?token=<authentication token>.

import { BridgeApi } from './api.js';
import { renderWalletSelection } from './authPage.js';

const container = document.getElementById('app');
if (container) {
  const token = new URLSearchParams(window.location.search).get('token');
  const deps = {
    api: new BridgeApi(''),
    navigate: (url: string) => window.location.assign(url),
    sleep: (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms)),
  };
  if (token) {
    void renderWalletSelection(container, token, deps);
  } else {
    container.innerHTML =
      '<p class="error-msg">Missing sign-in token. Start from the application.</p>';
  }
}
