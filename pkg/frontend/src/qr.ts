// QR rendering for cross-device flows. The payload is the wallet deep link
// verbatim: what the camera decodes must equal the link byte for byte.

import QRCode from 'qrcode';

export interface QrMatrix {
  size: number;
  isDark(row: number, col: number): boolean;
}

export function qrMatrix(payload: string): QrMatrix {
  const code = QRCode.create(payload, { errorCorrectionLevel: 'M' });
  const modules = code.modules;
  return {
    size: modules.size,
    isDark: (row, col) => !!modules.get(row, col),
  };
}

/** Render the QR as a CSS grid of module cells inside `container`. */
export function renderQr(container: HTMLElement, payload: string): void {
  const matrix = qrMatrix(payload);
  container.innerHTML = '';
  const grid = container.ownerDocument.createElement('div');
  grid.className = 'qr-grid';
  grid.setAttribute('role', 'img');
  grid.setAttribute('aria-label', 'wallet invocation QR code');
  grid.style.display = 'grid';
  grid.style.gridTemplateColumns = `repeat(${matrix.size}, 6px)`;
  for (let row = 0; row < matrix.size; row++) {
    for (let col = 0; col < matrix.size; col++) {
      const cell = container.ownerDocument.createElement('div');
      const dark = matrix.isDark(row, col);
      cell.className = dark ? 'qr-module qr-dark' : 'qr-module qr-light';
      cell.style.width = '6px';
      cell.style.height = '6px';
      cell.style.background = dark ? '#000' : '#fff';
      grid.appendChild(cell);
    }
  }
  container.appendChild(grid);
}

/**
 * Rasterize a rendered `.qr-grid` back into RGBA pixels (with quiet zone),
 * the input shape QR decoders expect. Used by tests to prove the rendered
 * code scans back to the exact payload.
 */
export function rasterizeQrGrid(
  grid: HTMLElement,
  scale = 8,
  quietModules = 4,
): { data: Uint8ClampedArray; width: number; height: number } {
  const cells = Array.from(grid.querySelectorAll('.qr-module'));
  const size = Math.sqrt(cells.length);
  if (!Number.isInteger(size)) {
    throw new Error(`qr grid is not square: ${cells.length} cells`);
  }
  const dim = (size + quietModules * 2) * scale;
  const data = new Uint8ClampedArray(dim * dim * 4).fill(255);
  cells.forEach((cell, index) => {
    if (!cell.classList.contains('qr-dark')) return;
    const row = Math.floor(index / size);
    const col = index % size;
    for (let dy = 0; dy < scale; dy++) {
      for (let dx = 0; dx < scale; dx++) {
        const y = (row + quietModules) * scale + dy;
        const x = (col + quietModules) * scale + dx;
        const offset = (y * dim + x) * 4;
        data[offset] = 0;
        data[offset + 1] = 0;
        data[offset + 2] = 0;
      }
    }
  });
  return { data, width: dim, height: dim };
}
