// Admin token holder. The token lives in memory with a sessionStorage
// fallback so a reload within the session survives; it never appears in
// URLs.

const STORAGE_KEY = 'vcbridge.admin.token';

let inMemory: string | null = null;

export function setAdminToken(token: string): void {
  inMemory = token;
  try {
    sessionStorage.setItem(STORAGE_KEY, token);
  } catch {
    // storage unavailable (private mode); memory copy still works
  }
}

export function getAdminToken(): string | null {
  if (inMemory) return inMemory;
  try {
    inMemory = sessionStorage.getItem(STORAGE_KEY);
  } catch {
    inMemory = null;
  }
  return inMemory;
}

export function clearAdminToken(): void {
  inMemory = null;
  try {
    sessionStorage.removeItem(STORAGE_KEY);
  } catch {
    // nothing to clean
  }
}
