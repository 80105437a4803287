/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_heightplot_free: (a: number, b: number) => void;
export const __wbg_propagationcurve_free: (a: number, b: number) => void;
export const heightPlot: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const heightplot_heights: (a: number) => [number, number];
export const heightplot_nPoints: (a: number) => number;
export const heightplot_peakHeight: (a: number) => number;
export const heightplot_psd: (a: number) => [number, number];
export const heightplot_ratioAbove: (a: number, b: number) => [number, number, number];
export const propagationCurve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const propagationcurve_distances: (a: number) => [number, number];
export const propagationcurve_fourRay: (a: number) => [number, number];
export const propagationcurve_maxDifference: (a: number) => number;
export const propagationcurve_twoRay: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
