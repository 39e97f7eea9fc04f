// Wire types of the engine's control API. The console never does mapping
// math itself; these are carried opaquely between GET and PUT.

export interface ScalerParams {
  in_min: number;
  in_max: number;
  out_min: number;
  out_max: number;
  exponent: number;
}

export interface RoutingMatrix {
  gains: number[][];
}

export interface InputParam {
  name: string;
  address: string;
}

export interface OutputParam {
  name: string;
  address: string;
  scaler: ScalerParams;
}

export interface Preset {
  id: string;
  matrix: RoutingMatrix;
  scalers: ScalerParams[];
  created_at: number;
}

export interface MappingState {
  inputs: InputParam[];
  outputs: OutputParam[];
  matrix: RoutingMatrix;
  presets: Preset[];
}

export interface MotionSnapshot {
  mean_h: number;
  mean_v: number;
  global_motion: number;
  pan: [number, number];
  channel_weights: [number, number, number, number];
}

export interface DescriptorSnapshot {
  timestamp_ms: number;
  warmth: number;
  sharpness: number;
  detail: number;
  detail_bands: number[];
  luminance: number;
  motion: MotionSnapshot;
}

export type ScalerField = keyof ScalerParams;

/** Descriptor series shown in the monitor plots, with their value ranges. */
export const PLOT_SERIES: { key: string; label: string; min: number; max: number }[] = [
  { key: "warmth", label: "warmth", min: -1, max: 1 },
  { key: "sharpness", label: "sharpness", min: 0, max: 1 },
  { key: "detail", label: "detail", min: 0, max: 1 },
  { key: "luminance", label: "luminance", min: 0, max: 1 },
  { key: "motion", label: "motion", min: 0, max: 1 },
];

export function seriesValue(snap: DescriptorSnapshot, key: string): number {
  if (key === "motion") return snap.motion.global_motion;
  return (snap as unknown as Record<string, number>)[key];
}
