/* tslint:disable */
/* eslint-disable */

export class CollisionCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly angles: Float64Array;
    readonly empirical: Float64Array;
    readonly theoretical: Float64Array;
}

export class KernelCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly angles: Float64Array;
    readonly closed: Float64Array;
    readonly mc_mean: Float64Array;
    readonly mc_stderr: Float64Array;
    readonly series: Float64Array;
}

export class SmootherMap {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly height: number;
    readonly train_labels: Float64Array;
    readonly train_lat: Float64Array;
    readonly train_lon: Float64Array;
    /**
     * Row-major smoother values; row 0 is the northernmost latitude.
     */
    readonly values: Float64Array;
    readonly width: number;
}

export function collision_curve(h: number, n_angles: number, samples: number, seed: number): CollisionCurve;

export function kernel_curve(q: number, ratio: number, min_angle: number, n_angles: number, n_mc: number, seed: number): KernelCurve;

export function smoother_map(n_train: number, q: number, labels: string, width: number, height: number, seed: number): SmootherMap;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_collisioncurve_free: (a: number, b: number) => void;
    readonly __wbg_kernelcurve_free: (a: number, b: number) => void;
    readonly __wbg_smoothermap_free: (a: number, b: number) => void;
    readonly collision_curve: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly collisioncurve_angles: (a: number) => [number, number];
    readonly collisioncurve_empirical: (a: number) => [number, number];
    readonly collisioncurve_theoretical: (a: number) => [number, number];
    readonly kernel_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly kernelcurve_angles: (a: number) => [number, number];
    readonly kernelcurve_closed: (a: number) => [number, number];
    readonly kernelcurve_mc_mean: (a: number) => [number, number];
    readonly kernelcurve_mc_stderr: (a: number) => [number, number];
    readonly kernelcurve_series: (a: number) => [number, number];
    readonly smoother_map: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly smoothermap_height: (a: number) => number;
    readonly smoothermap_train_labels: (a: number) => [number, number];
    readonly smoothermap_train_lat: (a: number) => [number, number];
    readonly smoothermap_train_lon: (a: number) => [number, number];
    readonly smoothermap_values: (a: number) => [number, number];
    readonly smoothermap_width: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
