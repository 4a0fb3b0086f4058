/** Wire types mirroring the server's session views. The UI never invents
 * values for these fields; everything rendered traces back to the last
 * view received. */

export interface NpcView {
  id: string;
  name: string;
  node: string;
  line: string;
  choices: string[];
  distracter: boolean;
}

export interface AgentPresentation {
  emotion: string;
  animation: string;
  speech: string;
}

export interface ConceptMapSlot {
  id: string;
  context: string;
}

export interface ConceptMapView {
  template: string;
  prompt: string;
  slots: ConceptMapSlot[];
  labels: string[];
  assignments: Record<string, string>;
  wrong_slots: string[];
}

export type SessionStatus = "active" | "completed" | "expired";

export interface ClientView {
  scene: string;
  status: SessionStatus;
  clock_ms: number;
  npcs: NpcView[];
  agent: AgentPresentation;
  concept_map: ConceptMapView | null;
  pending_prompts: string[];
}

export type LearnerAction =
  | { type: "dialogue_choice"; npc: string; choice: number }
  | { type: "teach_submit"; assignments: Record<string, string> }
  | { type: "tick" };
