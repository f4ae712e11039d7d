/** Colorblind-safe sequential colormap (viridis control points) and a
 * categorical palette for algorithm curves. */

const VIRIDIS: Array<[number, number, number]> = [
    [68, 1, 84], [71, 44, 122], [59, 81, 139], [44, 113, 142], [33, 144, 141],
    [39, 173, 129], [92, 200, 99], [170, 220, 50], [253, 231, 37],
];

export function viridis(t: number): string {
    const x = Math.min(Math.max(t, 0), 1) * (VIRIDIS.length - 1);
    const i = Math.min(Math.floor(x), VIRIDIS.length - 2);
    const f = x - i;
    const mix = (a: number, b: number) => Math.round(a + (b - a) * f);
    const [r1, g1, b1] = VIRIDIS[i];
    const [r2, g2, b2] = VIRIDIS[i + 1];
    return `rgb(${mix(r1, r2)},${mix(g1, g2)},${mix(b1, b2)})`;
}

// Okabe-Ito palette
const CURVES = ["#0072B2", "#D55E00", "#009E73", "#CC79A7", "#E69F00", "#56B4E9"];

export function curveColor(index: number): string {
    return CURVES[index % CURVES.length];
}
