/** Shared fixtures: a snapshot of the reference scenario's presentation
 * vocabulary plus sample views shaped exactly like server responses. */

import type { ClientView } from "../src/types";

/** Strings a client may legitimately render, per the reference scenario:
 * affect-cue emotions plus the defaults, and the presentation assets. */
export const ALLOWED_EMOTIONS = ["neutral", "sad", "pleading", "happy"];
export const ALLOWED_ANIMATIONS = [
  "idle", "cry", "dance", "bow", "droop", "sparkle", "revival",
];

export const LABELS = [
  "Osmosis",
  "Semi-Permeable Membrane",
  "High Concentration",
  "Low Solvent Concentration",
];

export const CORRECT: Record<string, string> = {
  membrane: "Semi-Permeable Membrane",
  diffusion_source: "High Concentration",
  osmosis_target: "Low Solvent Concentration",
  osmosis_name: "Osmosis",
};

export const WRONG: Record<string, string> = {
  membrane: "Osmosis",
  diffusion_source: "High Concentration",
  osmosis_target: "Low Solvent Concentration",
  osmosis_name: "Semi-Permeable Membrane",
};

export function townView(): ClientView {
  return {
    scene: "knowledge-town",
    status: "active",
    clock_ms: 0,
    npcs: [
      {
        id: "water_molecule",
        name: "Water Molecule",
        node: "greet",
        line: "Hello ! Welcome to VS Saga !",
        choices: ["Who are you?", "Take me to the dying banana plant."],
        distracter: false,
      },
      {
        id: "animal",
        name: "Island Animal",
        node: "hello",
        line: "Squawk! Forget the books, come splash at the beach!",
        choices: ["Chat with the animal.", "No, I'm busy learning."],
        distracter: true,
      },
    ],
    agent: { emotion: "neutral", animation: "idle",
             speech: "Hello ! Welcome to VS Saga !" },
    concept_map: null,
    pending_prompts: [],
  };
}

export function teachView(wrongSlots: string[] = []): ClientView {
  return {
    scene: "tree",
    status: "active",
    clock_ms: 20000,
    npcs: [
      {
        id: "water_molecule_tree",
        name: "Water Molecule",
        node: "plead",
        line: "The banana plant is dying...",
        choices: ["I'm ready to teach you.", "I won't teach you."],
        distracter: false,
      },
    ],
    agent: { emotion: "sad", animation: "cry",
             speech: "Please teach me!" },
    concept_map: {
      template: "osmosis_diffusion",
      prompt: "Let's teach the water molecule!",
      slots: [
        { id: "membrane", context: "Movement of particles through the ___" },
        { id: "diffusion_source", context: "from an area of ___" },
        { id: "osmosis_target", context: "to a ___" },
        { id: "osmosis_name", context: "is known as ___" },
      ],
      labels: [...LABELS],
      assignments: {},
      wrong_slots: wrongSlots,
    },
    pending_prompts: ["teach_request"],
  };
}

export function completedView(): ClientView {
  return {
    ...teachView(),
    status: "completed",
    agent: { emotion: "happy", animation: "revival",
             speech: "Thank you! Now I can enter the roots!" },
    concept_map: null,
    pending_prompts: [],
  };
}
