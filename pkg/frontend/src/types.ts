/** Shapes of the service API documents the UI consumes. */

export interface AttributeDetail {
  name: string;
  kind: string;
  distinct: number;
  missing: number;
}

export interface DatasetSummary {
  relation: string;
  instances: number;
  attributes: number;
  attribute_details: AttributeDetail[];
  class_distribution: Record<string, number>;
}

export interface StoredDataset {
  id: string;
  filename: string;
  summary: DatasetSummary;
}

export interface ParamInfo {
  name: string;
  kind: "int" | "float" | "flag";
  default: number | boolean;
  min?: number;
  max?: number;
}

export interface AlgorithmInfo {
  id: string;
  family: "classifier" | "clusterer" | "associator";
  params: ParamInfo[];
}

export interface PerClassMetrics {
  label: string;
  precision: number;
  recall: number;
  f1: number;
}

export interface ResultDoc {
  algorithm: string;
  params: Record<string, number | boolean>;
  dataset: { relation: string; instances: number; attributes: number };
  accuracy?: number;
  class_labels?: string[];
  confusion?: number[][];
  per_class?: PerClassMetrics[];
  clusters?: { sizes: number[]; iterations: number; within_score: number };
  rules?: {
    antecedent: string[];
    consequent: string[];
    support: number;
    confidence: number;
  }[];
  build_time_s: number;
  cv_time_s?: number;
  model_text: string;
}

export interface RunSnapshot {
  id: string;
  algorithm: string;
  status: "pending" | "running" | "done" | "cancelled" | "failed";
  progress: number;
  result?: ResultDoc;
  error?: string;
}

export interface RunSpec {
  algorithm: string;
  params: Record<string, number | boolean>;
  seed: number;
  folds: number;
  class_index: number | "last";
}
