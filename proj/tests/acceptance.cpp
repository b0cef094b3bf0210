// Acceptance checks, one pass/fail line each. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "autolike/classify.hpp"
#include "autolike/errors.hpp"
#include "autolike/harness.hpp"
#include "autolike/io.hpp"
#include "autolike/protocol.hpp"
#include "toy_mdp.hpp"

using namespace autolike;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str());
  if (!ok) ++failures;
}

double now_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// --- criterion 1: proximity reward -----------------------------------------

void criterion_reward() {
  Goal g{GridLevel{10}, GridLevel{10}, "t"};
  bool ok =
      std::abs(reward(State{GridLevel{10}, GridLevel{10}}, g) - 1.0) < 1e-9 &&
      std::abs(reward(State{GridLevel{0}, GridLevel{0}}, g) - 0.0) < 1e-9 &&
      std::abs(reward(State{GridLevel{8}, GridLevel{9}}, g) -
               (1.0 - std::sqrt(0.05) / std::sqrt(2.0))) < 1e-9;
  report(1, ok, "proximity reward matches hand values within 1e-9");
}

// --- criterion 2: TD backup ------------------------------------------------

void criterion_q_update() {
  bool ok = true;
  State s{GridLevel{0}, GridLevel{0}};
  State sn{GridLevel{1}, GridLevel{0}};
  {
    QTable q;
    q_update(q, s, ActionKind::Like, 1.0, sn, 0.5, 0.9);
    ok = ok && std::abs(q.value(s, ActionKind::Like) - 0.5) < 1e-12;
  }
  {
    QTable q;
    q.set(s, ActionKind::Like, 0.37);
    q_update(q, s, ActionKind::Like, 0.37, sn, 0.8, 0.0);
    ok = ok && std::abs(q.value(s, ActionKind::Like) - 0.37) < 1e-12;
  }
  {
    QTable q;
    q.set(s, ActionKind::Like, 0.5);
    q.set(sn, ActionKind::Watch, 0.2);
    q_update(q, s, ActionKind::Like, 0.84189, sn, 0.1, 0.9);
    double expect = 0.5 + 0.1 * (0.84189 + 0.9 * 0.2 - 0.5);
    ok = ok && std::abs(q.value(s, ActionKind::Like) - expect) < 1e-12;
  }
  std::mt19937_64 rng(1);
  auto unif = [&](double lo, double hi) {
    return lo + (hi - lo) * (rng() >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 10000 && ok; ++i) {
    QTable q;
    State rs{GridLevel{int(rng() % 11)}, GridLevel{int(rng() % 11)}};
    State rn{GridLevel{int(rng() % 11)}, GridLevel{int(rng() % 11)}};
    ActionKind a = kActionOrder[rng() % kActionCount];
    for (ActionKind b : kActionOrder) {
      q.set(rn, b, unif(-5, 5));
      q.set(rs, b, unif(-5, 5));
    }
    double before = q.value(rs, a);
    double alpha = unif(1e-6, 1.0), gamma = unif(0, 1), r = unif(-2, 2);
    double mx = q.max_value(rn);
    if (rs == rn) {
      // the update rewrites Q(s,a); keep the identity well-defined
      continue;
    }
    q_update(q, rs, a, r, rn, alpha, gamma);
    double lhs = q.value(rs, a) - before;
    double rhs = alpha * (r + gamma * mx - before);
    ok = ok && std::abs(lhs - rhs) < 1e-9;
  }
  report(2, ok, "TD backup matches the update identity (examples + 10,000 random tuples)");
}

// --- criterion 3: convergence to the value-iteration fixed point ------------

void criterion_convergence() {
  double t0 = now_s();
  toy::Env env;
  Classifier cls;  // zero-noise oracle
  AgentLoop loop(env, toy::goal(), cls, 0.1, 0.9, 0);
  QTable q;
  Policy policy = Policy::epsilon_greedy(0.2);
  for (int t = 0; t < 50000; ++t) loop.step(policy, &q, Phase::Train);
  toy::ValueIteration oracle(0.9);
  bool policy_ok = true;
  double max_err = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      toy::Pos p{i, j};
      State s = toy::state_of(p);
      ActionKind greedy = ActionKind::Like;
      double best = q.value(s, ActionKind::Like);
      for (ActionKind a : kActionOrder) {
        double v = q.value(s, a);
        if (v > best) {
          best = v;
          greedy = a;
        }
        max_err = std::max(
            max_err,
            std::abs(v - oracle.q[toy::ValueIteration::idx(p)][int(a)]));
      }
      policy_ok = policy_ok && greedy == oracle.greedy(p);
    }
  }
  double elapsed = now_s() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "50k-step Q-learning vs value iteration (policy %s, max |dQ| "
                "%.4f, %.1fs)",
                policy_ok ? "identical" : "DIFFERS", max_err, elapsed);
  report(3, policy_ok && max_err <= 0.05 && elapsed < 30.0, buf);
}

// --- criteria 4-6: simulator drive ratios ----------------------------------

ExperimentConfig drive_config(Mode mode, const CatalogGenParams& gen,
                              double threshold, Dimensions dims,
                              std::uint64_t seed) {
  ExperimentConfig c;
  c.mode = mode;
  c.goal = Goal{GridLevel{10}, GridLevel{10}, "mental health"};
  c.horizon_T = mode == Mode::Controlled ? 200 : 1000;
  c.like_threshold = threshold;
  c.dimensions = dims;
  c.classifier.noise_sigma = 0.05;
  c.seed = seed;
  c.simulator = SimConfig{};
  c.simulator->catalog_gen = gen;
  return c;
}

struct DrivePair {
  RatioCurve curve;
  Pathway driven;
  Pathway control;
};

DrivePair run_pair(const CatalogGenParams& gen, double threshold,
                   Dimensions dims, std::uint64_t seed) {
  ExperimentConfig dc = drive_config(Mode::Streamlined, gen, threshold, dims, seed);
  Catalog catalog = catalog_from_config(dc);
  SimEnvironment denv(catalog, dc.simulator->params, seed);
  Pathway driven = run_driven(dc, denv).pathway;
  ExperimentConfig cc = drive_config(Mode::Controlled, gen, threshold, dims, seed);
  SimEnvironment cenv(catalog, cc.simulator->params, seed);
  Pathway control = run_controlled(cc, cenv).pathway;
  return DrivePair{compare(driven, control, dc.goal, threshold, dims),
                   std::move(driven), std::move(control)};
}

void criteria_topic_drive() {
  double t0 = now_s();
  double sum = 0.0, min_ratio = 1e300;
  int persistence_ok = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DrivePair pair = run_pair(default_catalog_params(), 0.5,
                              Dimensions::TopicOnly, seed);
    const RatioCurve& curve = pair.curve;
    std::size_t at = std::min<std::size_t>(150, curve.steps.size()) - 1;
    double ratio = curve.ratio[at];
    sum += ratio;
    min_ratio = std::min(min_ratio, ratio);
    // testing-phase on-topic rate vs the control over the same step range
    long long d = 0, c = 0;
    int n = 0;
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
      if (curve.phase[i] != Phase::Test) continue;
      ++n;
      d += curve.driven_cumulative[i] - (i ? curve.driven_cumulative[i - 1] : 0);
      c += curve.control_cumulative[i] - (i ? curve.control_cumulative[i - 1] : 0);
    }
    if (n > 0 && (c == 0 ? d > 0 : double(d) >= 1.5 * double(c))) {
      ++persistence_ok;
    }
  }
  double mean = sum / 10.0;
  double elapsed = now_s() - t0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "topic drive, 10 seeds: mean ratio@150 %.2f (>=2.0), min %.2f "
                "(>=1.5), %.1fs",
                mean, min_ratio, elapsed);
  report(4, mean >= 2.0 && min_ratio >= 1.5 && elapsed < 60.0, buf);
  std::snprintf(buf, sizeof(buf),
                "testing-phase on-topic rate >=1.5x control in %d/10 seeds (>=8)",
                persistence_ok);
  report(5, persistence_ok >= 8, buf);
}

CatalogGenParams sad_topic_params() {
  CatalogGenParams gen = default_catalog_params();
  for (auto& topic : gen.topics) {
    if (topic.label == "mental health") {
      // mixed-sentiment goal topic so a Both-dims policy has sad items to pick
      topic.sentiment_alpha = 2.0;
      topic.sentiment_beta = 2.0;
    }
  }
  return gen;
}

void criterion_two_dimension_drive() {
  double joint_sum = 0.0, sent_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DrivePair pair = run_pair(sad_topic_params(), 0.6, Dimensions::Both, seed);
    joint_sum += pair.curve.ratio.back();
    auto driven_sent = sentiment_post_process(pair.driven, 0.6);
    auto control_sent = sentiment_post_process(pair.control, 0.6);
    std::size_t n = std::min(driven_sent.size(), control_sent.size());
    sent_sum += double(driven_sent[n - 1]) /
                double(std::max<long long>(1, control_sent[n - 1]));
  }
  double joint_mean = joint_sum / 10.0, sent_mean = sent_sum / 10.0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "two-dimension drive: mean joint ratio %.2f (>=1.5), mean "
                "sentiment-only ratio %.2f (>=1.4)",
                joint_mean, sent_mean);
  report(6, joint_mean >= 1.5 && sent_mean >= 1.4, buf);
}

// --- criterion 7: discretization -------------------------------------------

int brute_force_level(double score) {
  int best = 0;
  double best_dist = 2.0;
  for (int level = 0; level <= 10; ++level) {
    double dist = std::abs(score - level / 10.0);
    if (dist <= best_dist) {  // ties round up
      best_dist = dist;
      best = level;
    }
  }
  return best;
}

void criterion_discretize() {
  bool ok = state_from_scores(0.06, 0.07) == State{GridLevel{1}, GridLevel{1}};
  for (int i = 0; i <= 10000 && ok; ++i) {
    double score = i / 10000.0;
    ok = discretize(score).level == brute_force_level(score);
  }
  report(7, ok, "discretize: (0.06,0.07) -> level 1 pair; 10,001-point brute-force scan");
}

// --- criterion 8: CLI byte determinism -------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool run_cli(const std::string& args) {
  std::string cmd = std::string(AUTOLIKE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

void criterion_cli_determinism() {
  fs::path dir = fs::temp_directory_path() /
                 ("autolike-accept-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  fs::path config = dir / "config.json";
  {
    std::ofstream out(config);
    out << R"({
      "mode": "streamlined",
      "goal": {"topic": 10, "sentiment": 10, "topic_label": "mental health"},
      "seed": 3,
      "classifier": {"kind": "oracle", "noise_sigma": 0.05},
      "simulator": {"catalog": {"topics": [
        {"label": "mental health", "count": 120},
        {"label": "dangerous challenges", "count": 120},
        {"label": "hate speech", "count": 120}
      ]}}
    })";
  }
  auto path = [&](const char* name) { return (dir / name).string(); };
  bool ok =
      run_cli("run --sim --config " + config.string() + " --out " + path("d1.jsonl")) &&
      run_cli("run --sim --config " + config.string() + " --out " + path("d2.jsonl")) &&
      run_cli("control --sim --config " + config.string() + " --out " + path("c1.jsonl")) &&
      run_cli("control --sim --config " + config.string() + " --out " + path("c2.jsonl"));
  if (ok) {
    std::string d1 = slurp(path("d1.jsonl"));
    ok = !d1.empty() && d1 == slurp(path("d2.jsonl")) &&
         slurp(path("c1.jsonl")) == slurp(path("c2.jsonl"));
  }
  if (ok) {
    ok = run_cli("analyze --driven " + path("d1.jsonl") + " --control " +
                 path("c1.jsonl") + " --topic \"mental health\" --out " +
                 path("r1.csv")) &&
         run_cli("analyze --driven " + path("d2.jsonl") + " --control " +
                 path("c2.jsonl") + " --topic \"mental health\" --out " +
                 path("r2.csv"));
    ok = ok && !slurp(path("r1.csv")).empty() &&
         slurp(path("r1.csv")) == slurp(path("r2.csv"));
  }
  fs::remove_all(dir);
  report(8, ok, "run/control/analyze CLI reruns are byte-identical");
}

// --- criterion 9: protocol robustness --------------------------------------

ProtocolMessage fuzz_message(std::mt19937_64& rng, long long step) {
  auto pick = [&](int n) { return int(rng() % n); };
  switch (pick(5)) {
    case 0: {
      HelloMsg hello;
      for (int i = 0; i < pick(4); ++i) hello.topics.push_back("t" + std::to_string(i));
      return hello;
    }
    case 1: {
      ContentMsg content;
      content.step = step;
      content.id = "item-" + std::to_string(rng() % 100000);
      bool scored = pick(2) == 0;
      if (scored) {
        content.topic_conf = pick(1001) / 1000.0;
        content.sent_conf = pick(1001) / 1000.0;
      }
      if (!scored || pick(2) == 0) content.text = "text \"q\" \\ #tag";
      if (pick(2) == 0) content.duration_s = pick(600) / 10.0;
      return content;
    }
    case 2:
      return ActionMsg{step, action_name(kActionOrder[pick(kActionCount)])};
    case 3:
      return ResetMsg{};
    default:
      return EndMsg{"r"};
  }
}

void criterion_protocol() {
  bool fuzz_ok = true;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000 && fuzz_ok; ++i) {
    ProtocolMessage msg = fuzz_message(rng, i);
    std::string line = encode_message(msg);
    ProtocolMessage back = decode_message(line.substr(0, line.size() - 1));
    fuzz_ok = back == msg && encode_message(back) == line;
  }

  auto content_at = [](long long step) {
    ContentMsg c;
    c.step = step;
    c.id = "c";
    c.topic_conf = 0.5;
    c.sent_conf = 0.5;
    return c;
  };
  using Script = std::vector<ProtocolMessage>;
  const std::vector<std::pair<Script, long long>> bad_scripts = {
      {{content_at(0)}, -1},
      {{ActionMsg{0, "like"}}, -1},
      {{ResetMsg{}}, -1},
      {{EndMsg{}}, -1},
      {{HelloMsg{2, {}}}, -1},
      {{HelloMsg{0, {}}}, -1},
      {{HelloMsg{}, HelloMsg{}}, -1},
      {{HelloMsg{}, content_at(0), HelloMsg{}}, 0},
      {{HelloMsg{}, content_at(0), content_at(1)}, 1},
      {{HelloMsg{}, ActionMsg{0, "like"}}, 0},
      {{HelloMsg{}, content_at(0), ActionMsg{0, "like"}, ActionMsg{0, "like"}}, 0},
      {{HelloMsg{}, content_at(3), ActionMsg{4, "like"}}, 4},
      {{HelloMsg{}, content_at(3), ActionMsg{2, "like"}}, 2},
      {{HelloMsg{}, content_at(3), ActionMsg{3, "like"}, content_at(3)}, 3},
      {{HelloMsg{}, content_at(3), ActionMsg{3, "like"}, content_at(1)}, 1},
      {{HelloMsg{}, content_at(0), ResetMsg{}}, 0},
      {{HelloMsg{}, content_at(0), EndMsg{}}, 0},
      {{HelloMsg{}, EndMsg{}, content_at(0)}, -1},
      {{HelloMsg{}, EndMsg{}, EndMsg{}}, -1},
      {{HelloMsg{}, content_at(7), ActionMsg{7, "like"}, EndMsg{}, ResetMsg{}}, 7},
  };
  int rejected = 0;
  for (const auto& [script, expect_step] : bad_scripts) {
    SessionValidator validator;
    try {
      for (const auto& msg : script) validator.feed(msg);
    } catch (const ProtocolError& e) {
      if (e.violation_step() == expect_step) ++rejected;
      continue;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "1,000-message round-trip fuzz %s; %d/20 bad scripts rejected "
                "at the expected step",
                fuzz_ok ? "ok" : "FAILED", rejected);
  report(9, fuzz_ok && rejected == 20, buf);
}

// --- criterion 10: evaluation metrics --------------------------------------

void criterion_metrics() {
  Metrics m = eval_metrics(EvalCounts{7, 3, 10, 1});
  bool ok = std::abs(m.precision - 0.7) < 1e-5 &&
            std::abs(m.recall - 0.875) < 1e-5 &&
            std::abs(m.accuracy - 0.80952) < 1e-5 &&
            std::abs(m.f1 - 0.77777) < 1e-5;

  // Balanced 63 on-topic / 63 off-topic set; zero-noise oracle.
  std::vector<LabeledItem> set;
  std::vector<std::string> topics = {"mental health", "other"};
  for (int i = 0; i < 63; ++i) {
    LabeledItem on;
    on.item.id = "on-" + std::to_string(i);
    on.item.topic_mixture = {0.9, 0.0};
    on.item.latent_sentiment = (i % 2) ? 0.9 : 0.1;
    on.is_on_topic = true;
    on.is_negative = i % 2 != 0;
    set.push_back(on);
    LabeledItem off;
    off.item.id = "off-" + std::to_string(i);
    off.item.topic_mixture = {0.1, 0.8};
    off.item.latent_sentiment = (i % 2) ? 0.1 : 0.9;
    off.is_on_topic = false;
    off.is_negative = i % 2 == 0;
    set.push_back(off);
  }
  Classifier oracle;  // zero noise
  Rng rng = make_stream(0, Stream::Classifier);
  ClassifierEval eval = eval_classifier(
      set, Goal{GridLevel{10}, GridLevel{10}, "mental health"}, topics, oracle,
      0.5, rng);
  Metrics topic = eval_metrics(eval.topic);
  Metrics sentiment = eval_metrics(eval.sentiment);
  ok = ok && eval.topic.total() == 126 && topic.accuracy == 1.0 &&
       sentiment.accuracy == 1.0;
  report(10, ok, "hand-computed metrics within 1e-5; 63/63 balanced set at accuracy 1.0");
}

}  // namespace

int main() {
  criterion_reward();
  criterion_q_update();
  criterion_convergence();
  criteria_topic_drive();
  criterion_two_dimension_drive();
  criterion_discretize();
  criterion_cli_determinism();
  criterion_protocol();
  criterion_metrics();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
