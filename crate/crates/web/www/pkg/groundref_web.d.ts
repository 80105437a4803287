/* tslint:disable */
/* eslint-disable */

/**
 * Height spectrum of one noise-free passage.
 */
export class HeightPlot {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Share of spectral power strictly above `threshold` metres.
     */
    ratioAbove(threshold: number): number;
    readonly heights: Float64Array;
    readonly nPoints: number;
    readonly peakHeight: number;
    /**
     * PSD scaled to unit total power.
     */
    readonly psd: Float64Array;
}

/**
 * Four-ray and two-ray propagation factors over a distance sweep.
 */
export class PropagationCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly distances: Float64Array;
    readonly fourRay: Float64Array;
    /**
     * Largest |four-ray − two-ray| over the sweep.
     */
    readonly maxDifference: number;
    readonly twoRay: Float64Array;
}

/**
 * Height spectrum of a vehicle with reflection points at `heights`
 * passing the radar at 50 km/h.
 */
export function heightPlot(preset_name: string, heights: Float64Array, toward: boolean, max_height: number): HeightPlot;

/**
 * Propagation factor of a scatterer at `scatterer_height` for the radar
 * preset (`"sor"` or `"sord"`), sampled at `n` distances.
 */
export function propagationCurve(preset_name: string, scatterer_height: number, reflection: number, d_min: number, d_max: number, n: number): PropagationCurve;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_heightplot_free: (a: number, b: number) => void;
    readonly __wbg_propagationcurve_free: (a: number, b: number) => void;
    readonly heightPlot: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly heightplot_heights: (a: number) => [number, number];
    readonly heightplot_nPoints: (a: number) => number;
    readonly heightplot_peakHeight: (a: number) => number;
    readonly heightplot_psd: (a: number) => [number, number];
    readonly heightplot_ratioAbove: (a: number, b: number) => [number, number, number];
    readonly propagationCurve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly propagationcurve_distances: (a: number) => [number, number];
    readonly propagationcurve_fourRay: (a: number) => [number, number];
    readonly propagationcurve_maxDifference: (a: number) => number;
    readonly propagationcurve_twoRay: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
