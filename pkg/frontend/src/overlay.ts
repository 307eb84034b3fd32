/** Bounding-box overlay geometry.
 *
 * Boxes arrive in image-intrinsic pixels. The overlay is positioned with
 * percentages of the intrinsic size, so CSS scaling of the image scales
 * the box identically and no resampling drift can creep in.
 */

import type { Box } from "./types.js";

export interface OverlayRect {
  leftPct: number;
  topPct: number;
  widthPct: number;
  heightPct: number;
}

export function overlayRect(box: Box, imageWidth: number, imageHeight: number): OverlayRect {
  return {
    leftPct: (box.x_min / imageWidth) * 100,
    topPct: (box.y_min / imageHeight) * 100,
    widthPct: ((box.x_max - box.x_min) / imageWidth) * 100,
    heightPct: ((box.y_max - box.y_min) / imageHeight) * 100,
  };
}

/** Pixel position of the overlay at a given displayed size (for tests:
 * the drift against the ideal scaled box must stay under a pixel). */
export function overlayPixels(
  rect: OverlayRect,
  displayWidth: number,
  displayHeight: number,
): { left: number; top: number; width: number; height: number } {
  return {
    left: (rect.leftPct / 100) * displayWidth,
    top: (rect.topPct / 100) * displayHeight,
    width: (rect.widthPct / 100) * displayWidth,
    height: (rect.heightPct / 100) * displayHeight,
  };
}

export function overlayStyle(rect: OverlayRect): string {
  return (
    `left:${rect.leftPct}%;top:${rect.topPct}%;` +
    `width:${rect.widthPct}%;height:${rect.heightPct}%`
  );
}
