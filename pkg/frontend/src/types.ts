// Wire types mirroring the store service JSON bodies.

export interface SearchResultItem {
  iri: string;
  score: number;
  matched_via: "exact_label" | "token_label" | "synonym" | "taxonomy_expansion";
  rank: number;
}

export interface SearchResponse {
  results: SearchResultItem[];
}

export interface DescribeResponse {
  iri: string;
  label: string | null;
  types: string[];
  superclasses: string[];
  subclasses: string[];
  instances: string[];
  relations: { predicate: string; object: string }[];
  attributes: { predicate: string; value: string }[];
}

export interface ProductsResponse {
  class: string;
  products: string[];
}

export interface Fluent {
  category: string;
  key: string;
  value: string;
}

export interface ProfileResponse {
  consumer_id: string;
  timestamp: number;
  fluents: Fluent[];
  history_length: number;
}

export interface RecommendationItem {
  product: string;
  need: { target: string; priority: number; source_rule: string };
  score: number;
}

export interface RecommendationsResponse {
  recommendations: RecommendationItem[];
}

export interface ErrorBody {
  code: string;
  message: string;
}
