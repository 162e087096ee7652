/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_collisioncurve_free: (a: number, b: number) => void;
export const __wbg_kernelcurve_free: (a: number, b: number) => void;
export const __wbg_smoothermap_free: (a: number, b: number) => void;
export const collision_curve: (a: number, b: number, c: number, d: number) => [number, number, number];
export const collisioncurve_angles: (a: number) => [number, number];
export const collisioncurve_empirical: (a: number) => [number, number];
export const collisioncurve_theoretical: (a: number) => [number, number];
export const kernel_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const kernelcurve_angles: (a: number) => [number, number];
export const kernelcurve_closed: (a: number) => [number, number];
export const kernelcurve_mc_mean: (a: number) => [number, number];
export const kernelcurve_mc_stderr: (a: number) => [number, number];
export const kernelcurve_series: (a: number) => [number, number];
export const smoother_map: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const smoothermap_height: (a: number) => number;
export const smoothermap_train_labels: (a: number) => [number, number];
export const smoothermap_train_lat: (a: number) => [number, number];
export const smoothermap_train_lon: (a: number) => [number, number];
export const smoothermap_values: (a: number) => [number, number];
export const smoothermap_width: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
