#include <algorithm>
#include <cstdio>
#include <exception>

#include "staghunt/errors.hpp"
#include "staghunt/runner.hpp"

namespace staghunt {

using nlohmann::json;

json scripted_purple_descriptor() { return describe(ScriptedPolicy{}); }

Trajectory run_episode(const StagHuntEnv& env, BluePolicy& blue, std::uint64_t seed, std::string episode_id,
                       json blue_descriptor) {
  Trajectory t;
  t.episode_id = std::move(episode_id);
  t.seed = seed;
  t.purple_seed = purple_seed(seed);
  t.blue_policy = std::move(blue_descriptor);
  t.purple_policy = scripted_purple_descriptor();

  GridState s = env.new_scenario(seed);
  t.initial_state = s;
  const ScriptedPolicyState purple = scripted_reset(t.purple_seed, s);
  blue.reset(seed, s);

  while (!env.is_terminal(s)) {
    StepRecord r;
    r.step = s.step;
    r.state = s;
    try {
      BlueDecision d = blue.act(s);
      r.blue_action = d.action;
      r.raw_reply = std::move(d.raw_reply);
      r.fallback = d.fallback;
    } catch (const TransportError& e) {
      t.outcome = EpisodeOutcome::Aborted;
      t.error = e.what();
      t.final_state = s;
      return t;
    }
    r.purple_action = scripted_act(purple, s);
    StepResult next = env.step(s, r.blue_action, r.purple_action);
    t.records.push_back(std::move(r));
    s = next.state;
    t.reward = next.reward;
  }
  t.final_state = s;
  t.outcome = (s.blue_capture && s.purple_capture) ? EpisodeOutcome::Capture : EpisodeOutcome::Timeout;
  return t;
}

namespace {

std::string episode_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "ep-%05d", index);
  return buf;
}

Trajectory run_indexed(const StagHuntEnv& env, const BatchSpec& spec, const json& descriptor, int i) {
  auto blue = make_blue_policy(spec.blue, spec.client, *spec.templates);
  return run_episode(env, *blue, episode_seed(spec.master_seed, static_cast<std::uint64_t>(i)), episode_name(i),
                     descriptor);
}

void check(const BatchSpec& spec) {
  if (spec.n_episodes < 1) throw UsageError("n_episodes must be at least 1");
  if (std::holds_alternative<HumanBridgePolicy>(spec.blue)) {
    throw UsageError("batch runs cannot use a human-controlled Blue hunter");
  }
}

}  // namespace

std::vector<Trajectory> run_episodes_serial(const StagHuntEnv& env, const BatchSpec& spec) {
  check(spec);
  const json descriptor = describe(spec.blue);
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(spec.n_episodes));
  for (int i = 0; i < spec.n_episodes; ++i) out.push_back(run_indexed(env, spec, descriptor, i));
  return out;
}

std::vector<Trajectory> run_episodes_parallel(const StagHuntEnv& env, const BatchSpec& spec) {
  check(spec);
  const json descriptor = describe(spec.blue);
  std::vector<Trajectory> out(static_cast<std::size_t>(spec.n_episodes));
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < spec.n_episodes; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run_indexed(env, spec, descriptor, i);
    } catch (...) {
#pragma omp critical(staghunt_episode_failure)
      if (!failure) failure = std::current_exception();
    }
  }

  if (failure) std::rethrow_exception(failure);
  return out;
}

Exp3Summary summarize(const std::vector<Trajectory>& episodes) {
  Exp3Summary s;
  s.episodes = static_cast<int>(episodes.size());
  long length_sum = 0;
  int counted = 0;
  for (const Trajectory& t : episodes) {
    for (const StepRecord& r : t.records) s.fallbacks += r.fallback ? 1 : 0;
    if (t.outcome == EpisodeOutcome::Aborted || t.outcome == EpisodeOutcome::Partial) {
      ++s.aborted;
      continue;
    }
    ++counted;
    length_sum += t.length();
    s.max_length = std::max(s.max_length, t.length());
    if (t.outcome == EpisodeOutcome::Timeout) ++s.timeouts;
    if (t.outcome == EpisodeOutcome::Capture) ++s.captures;
    auto latch = [](const std::optional<TargetKind>& k) { return k ? std::string(to_string(*k)) : "none"; };
    ++s.outcomes[latch(t.final_state.blue_capture) + "/" + latch(t.final_state.purple_capture)];
    if (t.reward) {
      s.reward_totals.blue += t.reward->blue;
      s.reward_totals.purple += t.reward->purple;
    }
  }
  s.mean_length = counted == 0 ? 0.0 : static_cast<double>(length_sum) / counted;
  return s;
}

json to_json(const Exp3Summary& s) {
  return {{"episodes", s.episodes},
          {"aborted", s.aborted},
          {"captures", s.captures},
          {"timeouts", s.timeouts},
          {"mean_length", s.mean_length},
          {"max_length", s.max_length},
          {"outcomes_blue_purple", s.outcomes},
          {"reward_totals", to_json(s.reward_totals)},
          {"fallbacks", s.fallbacks}};
}

Exp3Result run_experiment3(const StagHuntEnv& env, const BatchSpec& spec, bool parallel) {
  Exp3Result r;
  r.dataset.manifest.producer = "runner";
  r.dataset.manifest.seed = spec.master_seed;
  r.dataset.manifest.template_version = spec.templates->version;
  r.dataset.manifest.env = env.config();
  if (const auto* llm = std::get_if<LlmPolicy>(&spec.blue)) {
    r.dataset.manifest.model = describe(*llm);
  }
  r.dataset.manifest.extra = {{"n_episodes", spec.n_episodes}};
  r.dataset.episodes = parallel ? run_episodes_parallel(env, spec) : run_episodes_serial(env, spec);
  r.summary = summarize(r.dataset.episodes);
  return r;
}

}  // namespace staghunt
