#pragma once

// The scripted 2-action world behind data/hand_trace.golden, shared by the
// unit test and the acceptance run.

#include "pcnsm/learner.hpp"

#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcnsm::testing {

struct HandTrace {
  std::vector<StepRecord> steps;
  std::vector<double> final_q;
};

inline HandTrace load_hand_trace(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  HandTrace g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream s(line);
    std::string tag;
    s >> tag;
    if (tag == "step") {
      StepRecord r;
      int exploratory = 0;
      double q0 = 0, q1 = 0;
      s >> r.t >> r.chosen_action.index >> exploratory >> r.reward >> r.q_of_chosen >> q0 >> q1;
      if (!s)
        throw std::runtime_error("golden: malformed step line: " + line);
      r.was_exploratory = exploratory != 0;
      r.per_action_q = {q0, q1};
      g.steps.push_back(r);
    } else if (tag == "final_q") {
      double q;
      while (s >> q)
        g.final_q.push_back(q);
    } else {
      throw std::runtime_error("golden: unknown tag " + tag);
    }
  }
  return g;
}

/// Runs three agent steps in the scripted world with the scripted draws.
inline HandTrace run_hand_trace() {
  AgentConfig cfg;
  cfg.k = 1;
  cfg.epsilon = 0.5;
  cfg.gamma = 0.5;
  cfg.beta = 0.5;
  cfg.lambda = 0.0;
  cfg.endo_updates_per_step = 1;
  const MetricSpec metric = make_discounted_metric(0.0, 2.0, cfg.truncation_tol);

  ScriptedRandom rng;
  rng.push_real(0.9);
  rng.push_real(0.1);
  rng.push_real(0.9);
  rng.push_int(1, 1, 1);
  rng.push_int(1, 2, 2);

  History h(1);
  std::optional<ActionId> previous;
  Observation o = Observation::Constant(1, 0.0);
  double r = 0.0;
  HandTrace out;
  for (int i = 0; i < 3; ++i) {
    out.steps.push_back(agent_step(h, cfg, metric, 2, previous, o, r, rng));
    previous = out.steps.back().chosen_action;
    o = Observation::Constant(1, previous->index == 0 ? 1.0 : 2.0);
    r = previous->index == 0 ? 1.0 : -1.0;
  }
  if (!rng.exhausted())
    throw std::logic_error("hand trace: scripted draws left over");
  out.final_q.assign(h.qvalues().begin(), h.qvalues().end());
  return out;
}

} // namespace pcnsm::testing
