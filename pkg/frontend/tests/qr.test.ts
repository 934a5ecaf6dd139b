// QR encode/render/decode round-trip: what the camera reads must equal the
// payload byte for byte.

import jsQR from 'jsqr';
import { describe, expect, it } from 'vitest';

import { qrMatrix, rasterizeQrGrid, renderQr } from '../src/qr.js';

const LINKS = [
  'eudi-openid4vp://present?correlation_id=abc&request_uri=' +
    encodeURIComponent('https://bridge.example/verify/request/abc?ecosystem=eudi'),
  'didcomm://present?correlation_id=xyz&request_uri=' +
    encodeURIComponent('http://127.0.0.1:8400/verify/request/xyz?ecosystem=aries'),
  'openid4vp://present?correlation_id=123&request_uri=x',
];

describe('qr round-trip', () => {
  it.each(LINKS)('decodes back to the exact payload: %s', (link) => {
    const container = document.createElement('div');
    document.body.appendChild(container);
    renderQr(container, link);
    const grid = container.querySelector<HTMLElement>('.qr-grid')!;
    const raster = rasterizeQrGrid(grid);
    const decoded = jsQR(raster.data, raster.width, raster.height);
    expect(decoded).toBeTruthy();
    expect(decoded!.data).toBe(link);
  });

  it('matrix dimensions are square and positive', () => {
    const matrix = qrMatrix(LINKS[0]);
    expect(matrix.size).toBeGreaterThan(20);
    expect(typeof matrix.isDark(0, 0)).toBe('boolean');
  });

  it('re-render replaces the previous grid', () => {
    const container = document.createElement('div');
    renderQr(container, LINKS[0]);
    renderQr(container, LINKS[2]);
    expect(container.querySelectorAll('.qr-grid')).toHaveLength(1);
  });
});
