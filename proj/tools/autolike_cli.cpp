#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <CLI11.hpp>

#include "autolike/errors.hpp"
#include "autolike/harness.hpp"
#include "autolike/io.hpp"
#include "autolike/jsonutil.hpp"
#include "autolike/protocol.hpp"

namespace {

using namespace autolike;

void print_error(const std::string& kind, const std::string& message,
                 long long step = -1) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  if (step >= 0) j["violation_step"] = step;
  std::cerr << j.dump() << "\n";
}

// Blocking line-oriented TCP connection for driver sessions.
class SocketStream {
public:
  explicit SocketStream(const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos) {
      throw ProtocolError("driver address must be host:port or '-': " + addr);
    }
    std::string host = addr.substr(0, colon);
    std::string port = addr.substr(colon + 1);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0) {
      throw ProtocolError("cannot resolve driver address: " + addr);
    }
    for (addrinfo* p = res; p; p = p->ai_next) {
      fd_ = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
      if (fd_ < 0) continue;
      if (::connect(fd_, p->ai_addr, p->ai_addrlen) == 0) break;
      ::close(fd_);
      fd_ = -1;
    }
    freeaddrinfo(res);
    if (fd_ < 0) throw ProtocolError("cannot connect to driver: " + addr);
    buf_ = std::make_unique<FdBuf>(fd_);
    stream_ = std::make_unique<std::iostream>(buf_.get());
  }
  ~SocketStream() {
    if (fd_ >= 0) ::close(fd_);
  }
  std::iostream& stream() { return *stream_; }

private:
  class FdBuf : public std::streambuf {
  public:
    explicit FdBuf(int fd) : fd_(fd) { setg(in_, in_, in_); }

  protected:
    int underflow() override {
      ssize_t n = ::read(fd_, in_, sizeof(in_));
      if (n <= 0) return traits_type::eof();
      setg(in_, in_, in_ + n);
      return traits_type::to_int_type(*gptr());
    }
    int overflow(int c) override {
      if (c != traits_type::eof()) {
        char ch = static_cast<char>(c);
        if (::write(fd_, &ch, 1) != 1) return traits_type::eof();
      }
      return c;
    }
    std::streamsize xsputn(const char* s, std::streamsize n) override {
      return ::write(fd_, s, static_cast<size_t>(n));
    }

  private:
    int fd_;
    char in_[4096];
  };

  int fd_ = -1;
  std::unique_ptr<FdBuf> buf_;
  std::unique_ptr<std::iostream> stream_;
};

RunResult execute_run(const ExperimentConfig& config, bool force_sim,
                      const std::string& driver_override) {
  std::string driver =
      driver_override.empty() ? config.driver.value_or("") : driver_override;
  if (force_sim) driver.clear();
  auto run = [&](Environment& env) {
    return config.mode == Mode::Controlled ? run_controlled(config, env)
                                           : run_driven(config, env);
  };
  if (!driver.empty()) {
    if (driver == "-") {
      DriverEnvironment env(std::cin, std::cout);
      RunResult result = run(env);
      env.end("horizon reached");
      return result;
    }
    SocketStream sock(driver);
    DriverEnvironment env(sock.stream(), sock.stream());
    RunResult result = run(env);
    env.end("horizon reached");
    return result;
  }
  SimEnvironment env(catalog_from_config(config),
                     config.simulator ? config.simulator->params : SimParams{},
                     config.seed);
  return run(env);
}

ExperimentConfig load_for_run(const std::string& config_path,
                              std::int64_t seed_override) {
  ExperimentConfig config = load_config_file(config_path);
  if (seed_override >= 0) {
    config.seed = static_cast<std::uint64_t>(seed_override);
  }
  return config;
}

int cmd_run(const std::string& config_path, std::int64_t seed,
            const std::string& out_path, bool use_sim,
            const std::string& driver) {
  ExperimentConfig config = load_for_run(config_path, seed);
  if (config.mode == Mode::Controlled) {
    throw ConfigError("run requires streamlined or rl mode; use `control`");
  }
  RunResult result = execute_run(config, use_sim, driver);
  result.pathway.config_digest = config_digest(config);
  write_pathway_file(result.pathway, out_path);
  json summary;
  summary["pathway"] = out_path;
  summary["steps"] = result.pathway.records.size();
  if (result.stop_step) {
    summary["stop_step"] = *result.stop_step;
  } else {
    summary["goal_met"] = false;
  }
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_control(const std::string& config_path, std::int64_t seed,
                const std::string& out_path, bool use_sim,
                const std::string& driver) {
  ExperimentConfig config = load_for_run(config_path, seed);
  if (config.mode != Mode::Controlled) {
    config.mode = Mode::Controlled;
    config.horizon_T = 200;
  }
  RunResult result = execute_run(config, use_sim, driver);
  result.pathway.config_digest = config_digest(config);
  write_pathway_file(result.pathway, out_path);
  json summary;
  summary["pathway"] = out_path;
  summary["steps"] = result.pathway.records.size();
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_analyze(const std::string& driven_path, const std::string& control_path,
                const std::string& topic, double threshold,
                const std::string& out_path, const std::string& dimensions,
                bool sentiment_only) {
  Pathway driven = read_pathway_file(driven_path);
  Pathway control = read_pathway_file(control_path);
  Goal goal;
  goal.topic_label = topic;
  Dimensions dims = sentiment_only ? Dimensions::SentimentOnly
                                   : dimensions_from_name(dimensions);
  RatioCurve curve = compare(driven, control, goal, threshold, dims);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open report for writing: " + out_path);
  write_ratio_csv(curve, out);
  return 0;
}

int cmd_eval_classifier(const std::string& dataset_path,
                        const std::string& lexicon_path, double threshold,
                        const std::string& out_path, std::string topic) {
  LabeledDataset dataset = read_labeled_dataset_file(dataset_path);
  Classifier classifier;
  classifier.mode = ClassifierMode::Keyword;
  classifier.lexicon = load_lexicon_file(lexicon_path);
  if (classifier.lexicon.topics.empty()) {
    throw ConfigError("lexicon defines no topics");
  }
  if (topic.empty()) topic = classifier.lexicon.topics.begin()->first;
  Goal goal;
  goal.topic_label = topic;
  Rng rng = make_stream(0, Stream::Classifier);
  ClassifierEval eval = eval_classifier(dataset.items, goal,
                                        dataset.topic_labels, classifier,
                                        threshold, rng);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open report for writing: " + out_path);
  out << "dimension,tp,fp,tn,fn,precision,recall,accuracy,f1\n";
  char buf[160];
  auto row = [&](const char* name, const EvalCounts& c) {
    Metrics m = eval_metrics(c);
    std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%lld,%lld,%.9g,%.9g,%.9g,%.9g\n",
                  name, c.tp, c.fp, c.tn, c.fn, m.precision, m.recall,
                  m.accuracy, m.f1);
    out << buf;
  };
  row("topic", eval.topic);
  row("sentiment", eval.sentiment);
  return 0;
}

int cmd_gen_catalog(const std::string& params_path, std::int64_t seed,
                    const std::string& out_path) {
  std::ifstream in(params_path);
  if (!in) throw InputError("cannot open params file: " + params_path);
  // Reuse the config loader by wrapping the generator recipe in a minimal
  // simulator config.
  json wrapper;
  json params = json::parse(in, nullptr, false);
  if (params.is_discarded()) throw ConfigError("params file is not valid JSON");
  wrapper["mode"] = "streamlined";
  wrapper["goal"] = {{"topic", 10}, {"sentiment", 10}, {"topic_label", "x"}};
  wrapper["seed"] = seed >= 0 ? seed : 0;
  wrapper["simulator"] = {{"catalog", params}};
  std::istringstream wrapped(wrapper.dump());
  ExperimentConfig config = load_config(wrapped);
  // The wrapper's goal label is a placeholder; the generator ignores it.
  Catalog catalog = catalog_from_config(config);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open catalog for writing: " + out_path);
  write_catalog(catalog, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audits a recommendation feed by driving it with learned "
               "interactions and recording the resulting pathways"};
  app.require_subcommand(1);

  std::string config_path, out_path, driver;
  std::int64_t seed = -1;
  bool use_sim = false;

  auto* run = app.add_subcommand("run", "Drive the feed toward the goal");
  run->add_option("--config", config_path)->required();
  run->add_option("--seed", seed);
  run->add_option("--out", out_path)->required();
  run->add_flag("--sim", use_sim, "Force the built-in simulator");
  run->add_option("--driver", driver, "Driver endpoint: '-' or host:port");

  auto* control = app.add_subcommand("control", "Scroll-only baseline run");
  control->add_option("--config", config_path)->required();
  control->add_option("--seed", seed);
  control->add_option("--out", out_path)->required();
  control->add_flag("--sim", use_sim);
  control->add_option("--driver", driver);

  std::string driven_path, control_path, topic, dimensions = "topic_only";
  double threshold = 0.5;
  bool sentiment_only = false;
  auto* analyze = app.add_subcommand("analyze", "Driven-vs-control report");
  analyze->add_option("--driven", driven_path)->required();
  analyze->add_option("--control", control_path)->required();
  analyze->add_option("--topic", topic)->required();
  analyze->add_option("--threshold", threshold);
  analyze->add_option("--out", out_path)->required();
  analyze->add_option("--dimensions", dimensions)
      ->check(CLI::IsMember({"topic_only", "sentiment_only", "both"}));
  analyze->add_flag("--sentiment-only", sentiment_only);

  std::string dataset_path, lexicon_path, eval_topic;
  auto* eval = app.add_subcommand("eval-classifier",
                                  "Confusion-matrix metrics for the keyword "
                                  "classifier on a labeled dataset");
  eval->add_option("--dataset", dataset_path)->required();
  eval->add_option("--lexicon", lexicon_path)->required();
  eval->add_option("--threshold", threshold);
  eval->add_option("--out", out_path)->required();
  eval->add_option("--topic", eval_topic);

  std::string params_path;
  auto* gen = app.add_subcommand("gen-catalog", "Generate a fixture catalog");
  gen->add_option("--params", params_path)->required();
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_path, use_sim, driver);
    if (control->parsed()) {
      return cmd_control(config_path, seed, out_path, use_sim, driver);
    }
    if (analyze->parsed()) {
      return cmd_analyze(driven_path, control_path, topic, threshold, out_path,
                         dimensions, sentiment_only);
    }
    if (eval->parsed()) {
      return cmd_eval_classifier(dataset_path, lexicon_path, threshold,
                                 out_path, eval_topic);
    }
    if (gen->parsed()) return cmd_gen_catalog(params_path, seed, out_path);
  } catch (const ProtocolError& e) {
    print_error("protocol", e.what(), e.violation_step());
    return 3;
  } catch (const ConfigError& e) {
    print_error("config", e.what());
    return 2;
  } catch (const FormatError& e) {
    print_error("format", e.what(), e.last_good_step());
    return 2;
  } catch (const AnalysisError& e) {
    print_error("analysis", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return 2;
  }
  return 1;
}
