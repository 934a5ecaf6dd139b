// Entry point for the admin console page.

import { BridgeApi } from './api.js';
import { renderAdminPage } from './adminPage.js';

const container = document.getElementById('app');
if (container) {
  void renderAdminPage(container, { api: new BridgeApi('') });
}
