// Wire types for the conceptprobe REST surface.

export interface DatasetSummary {
  id: string;
  name: string;
  objects: number;
  attributes: number;
  groupCount: number;
}

export interface DatasetDetail extends DatasetSummary {
  objectNames: string[];
  attributeNames: string[];
}

export interface GroupJson {
  id: number;
  representative: string;
  badge: number;
  members: string[];
  extent: string[];
}

export interface ExtentClassJson {
  filteredExtent: string[];
  groups: GroupJson[];
}

export interface LayerJson {
  sd: string;
  classes: ExtentClassJson[];
}

export interface LayoutJson {
  layers: LayerJson[];
}

export interface DeltaJson {
  entering: number[];
  leaving: number[];
  moved: { id: number; from: string; to: string }[];
  stable: number[];
}

export interface MutationResponse {
  revision: number;
  layout: LayoutJson;
  delta: DeltaJson;
}

export interface ProbeCreated {
  sessionId: string;
  revision: number;
  layout: LayoutJson;
}

export interface ProbeInfo {
  sessionId: string;
  datasetId: string;
  revision: number;
  probe: { objects: { name: string; weight: string }[] };
}

export interface RevealJson {
  extent: string[];
  highlighted: number[];
}

export interface CoversJson {
  covers: number[][];
  truncated: boolean;
}
