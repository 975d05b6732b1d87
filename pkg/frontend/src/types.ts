/** Payload shapes of the planning service; field names mirror the API. */

export interface StoreInfo {
  id: string;
  name: string;
  region: string;
}

export interface ProductInfo {
  id: string;
  name: string;
  category: string;
  price: number;
  weight_kg: number;
  blend: Record<string, number>;
  msi_per_kg: number;
  higg_score: number;
  demand?: number;
}

export interface Solution {
  store: string;
  store_index: number;
  k: number;
  trade_off_lambda: number;
  product_ids: string[];
  revenue_score: number;
  higg_score: number;
  objective_value: number;
}

export interface FrontSolution extends Solution {
  non_dominated: boolean;
  fabric_composition: Record<string, number>;
}

export interface FrontResponse {
  store: string;
  k: number;
  normalize: boolean;
  solutions: FrontSolution[];
}

export interface HistogramBin {
  lower: number;
  upper: number;
  count: number;
}

export interface HistogramsResponse {
  bins: number;
  higg: HistogramBin[];
  quality: HistogramBin[];
}

export interface HealthResponse {
  status: string;
  products: number;
  stores: number;
}

export interface OptimizeBody {
  store: string;
  k: number;
  trade_off_lambda: number;
  locked_in?: string[];
  locked_out?: string[];
  normalize?: boolean;
}

export interface ParetoBody {
  store: string;
  k: number;
  lambda_grid: number | number[];
  locked_in?: string[];
  locked_out?: string[];
  normalize?: boolean;
}
