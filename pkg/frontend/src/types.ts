// DTOs mirroring the eqdose service JSON schemas.

export interface CourseDto {
  n: number;
  d: number;
  m_per_day?: number;
  delta_t?: number | null;
  ja?: number;
  gap_after?: number;
}

export interface SolverConfigDto {
  d_ref?: number;
}

export interface EngineWarning {
  code: string;
  message: string;
}

export interface ApiError {
  code: string;
  message: string;
  field_path?: string;
}

export interface Envelope<T> {
  result?: T;
  error?: ApiError;
  engine_version: string;
  library_checksum: string;
}

export interface TissueInfo {
  name: string;
  kind: 'target' | 'oar';
  has_ntcp: boolean;
  has_cancer: boolean;
}

export interface TissuesResult {
  tissues: TissueInfo[];
}

export interface TimelineDto {
  overall_time: number;
  courses: { first_day: number; last_day: number }[];
}

export interface BedResult {
  tissue: string;
  bed: {
    geometric_bed: number;
    repair_surcharge: number;
    deficit: number;
    total_bed: number;
    clamped: boolean;
  };
  timeline: TimelineDto;
  warnings: EngineWarning[];
}

export interface EquivalentResult {
  tissue: string;
  eqd: number;
  n0: number;
  residual: number;
  bed_target_value: number;
  d_ref: number;
  timeline: TimelineDto;
  warnings: EngineWarning[];
}

export interface NtcpResult {
  tissue: string;
  eud_2gy: number;
  ntcp: number;
  warnings: EngineWarning[];
}

export interface RiskResult {
  tissue: string;
  eud_2gy: number;
  k_incidence: number;
  warnings: EngineWarning[];
}

// Minimal client surface so tests can inject canned responses.
export interface ServiceClient {
  get<T>(path: string): Promise<Envelope<T>>;
  post<T>(path: string, body: unknown): Promise<Envelope<T>>;
}
