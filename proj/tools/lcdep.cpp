// lcdep: command-line front end.
//
// Every subcommand resolves its settings from defaults, then an optional
// key=value --config file, then explicit flags. The resolved settings are
// echoed to stderr (and to <out>/config.txt with --out). Failures print one
// line "error<TAB>command<TAB>reason" and exit nonzero.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lcdep/analysis.hpp"
#include "lcdep/induction.hpp"
#include "lcdep/supervised.hpp"
#include "lcdep/transition.hpp"
#include "lcdep/treebank.hpp"

using namespace lcdep;

namespace {

class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int log_level() {
  const char* v = std::getenv("LCDEP_LOG");
  std::string s = v ? v : "warn";
  if (s == "debug") return 3;
  if (s == "info") return 2;
  if (s == "error" || s == "quiet") return 0;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[lcdep] " << msg << "\n";
}

// A subcommand's settings. Flags are named after keys with '_' -> '-'.
struct Settings {
  CLI::App* app = nullptr;
  std::vector<std::string> order;
  std::map<std::string, std::string> value;
  std::map<std::string, CLI::Option*> flag;
  std::map<std::string, std::string> flag_value;
  std::string config_path;

  void add(const std::string& key, const std::string& def, const std::string& help, const std::string& alias = "") {
    order.push_back(key);
    value[key] = def;
    std::string name = "--" + key;
    for (auto& c : name)
      if (c == '_') c = '-';
    if (!alias.empty()) name += ",--" + alias;
    flag[key] = app->add_option(name, flag_value[key], help + " (default: " + def + ")");
  }

  void resolve() {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw CommandError("cannot read config " + config_path);
      std::string line;
      int no = 0;
      while (std::getline(in, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
          auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
          return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos)
          throw CommandError(config_path + ":" + std::to_string(no) + ": expected key=value");
        std::string k = trim(line.substr(0, eq));
        for (auto& c : k)
          if (c == '-') c = '_';
        if (!value.count(k)) throw CommandError(config_path + ":" + std::to_string(no) + ": unknown key '" + k + "'");
        value[k] = trim(line.substr(eq + 1));
      }
    }
    for (const auto& k : order)
      if (flag[k]->count() > 0) value[k] = flag_value[k];
  }

  const std::string& str(const std::string& k) const { return value.at(k); }
  int integer(const std::string& k) const {
    const std::string& v = str(k);
    if (v == "inf") return kUnbounded;
    try {
      size_t pos;
      int x = std::stoi(v, &pos);
      if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw CommandError("setting " + k + ": expected an integer, got '" + v + "'");
  }
  double real(const std::string& k) const {
    const std::string& v = str(k);
    try {
      size_t pos;
      double x = std::stod(v, &pos);
      if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw CommandError("setting " + k + ": expected a number, got '" + v + "'");
  }
  bool boolean(const std::string& k) const {
    const std::string& v = str(k);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw CommandError("setting " + k + ": expected true or false, got '" + v + "'");
  }

  std::string echo() const {
    std::string s;
    for (const auto& k : order) s += k + "=" + value.at(k) + "\n";
    return s;
  }
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  Settings settings;
  std::vector<std::string> inputs;
  std::function<void(Command&)> run;
};

// Writes an artifact to <out>/<file>, or to stdout when --out is absent.
void emit(const Settings& s, const std::string& file, const std::string& text, bool to_stdout_if_no_out = true) {
  const std::string& out = s.str("out");
  if (out.empty()) {
    if (to_stdout_if_no_out) std::cout << text;
    return;
  }
  std::filesystem::create_directories(out);
  std::ofstream f(std::filesystem::path(out) / file, std::ios::binary);
  if (!f) throw CommandError("cannot write " + out + "/" + file);
  f << text;
  info("wrote " + out + "/" + file);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PosColumn pos_column(const Settings& s) {
  const std::string& v = s.str("pos");
  if (v == "coarse" || v == "upos") return PosColumn::kCoarse;
  if (v == "fine" || v == "xpos") return PosColumn::kFine;
  throw CommandError("setting pos: expected coarse or fine, got '" + v + "'");
}

Corpus read_input(const Command& c, size_t i = 0) {
  if (c.inputs.size() <= i) throw CommandError("missing input file");
  return read_conll_file(c.inputs[i], pos_column(c.settings));
}

Corpus prepared(const Command& c) {
  PrepareOptions opt;
  opt.strip_punct = c.settings.boolean("strip_punct");
  opt.max_len = c.settings.integer("max_len") == kUnbounded ? 0 : c.settings.integer("max_len");
  Corpus out = prepare_corpus(read_input(c), opt);
  info("prepared " + std::to_string(out.sentences.size()) + " sentences");
  return out;
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string x;
  while (std::getline(ss, x, ',')) {
    try {
      out.push_back(std::stoi(x));
    } catch (const std::exception&) {
      throw CommandError("expected a comma-separated integer list, got '" + s + "'");
    }
  }
  return out;
}

DepthMeasure depth_measure(const std::string& s) {
  if (s == "depth-re" || s == "re") return DepthMeasure::kAfterReduce;
  if (s == "depth-sh" || s == "sh") return DepthMeasure::kAfterShift;
  return measure_from_string(s);
}

std::string lang_of(const Command& c) {
  if (!c.settings.str("lang").empty()) return c.settings.str("lang");
  return c.inputs.empty() ? "-" : std::filesystem::path(c.inputs[0]).stem().string();
}

void analyze_depth(Command& c) {
  const auto& s = c.settings;
  System sys = system_from_string(s.str("system"));
  DepthMeasure m = depth_measure(s.str("measure"));
  auto h = depth_histogram(prepared(c), sys, m, s.integer("relax_c"), s.integer("jobs"));
  emit(s, "depth.tsv", histogram_tsv(h, lang_of(c), to_string(sys), to_string(m)));
}

void coverage(Command& c) {
  const auto& s = c.settings;
  System sys = system_from_string(s.str("system"));
  if (sys != System::kLeftCorner) throw CommandError("coverage is defined for the left-corner system only");
  const std::string& ms = s.str("measure");
  CoverageMeasure m;
  if (ms == "depth-re" || ms == "re") m = CoverageMeasure::kDepthRe;
  else if (ms == "raw") m = CoverageMeasure::kRaw;
  else throw CommandError("setting measure: expected depth-re or raw, got '" + ms + "'");
  auto rows = coverage_report(prepared(c), int_list(s.str("bounds")), s.integer("relax_c"), m, s.integer("jobs"));
  emit(s, "coverage.tsv", coverage_tsv(rows, lang_of(c), to_string(sys), ms));
}

void random_baseline_cmd(Command& c) {
  const auto& s = c.settings;
  System sys = system_from_string(s.str("system"));
  DepthMeasure m = depth_measure(s.str("measure"));
  auto h = random_baseline(prepared(c), sys, m, static_cast<std::uint64_t>(s.integer("seed")), s.integer("trials"),
                           s.integer("relax_c"), s.integer("jobs"));
  emit(s, "random.tsv", histogram_tsv(h, lang_of(c), to_string(sys), to_string(m)));
}

void oracle_trace(Command& c) {
  System sys = system_from_string(c.settings.str("system"));
  Corpus corpus = prepared(c);
  std::string out;
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    out += "# sentence " + std::to_string(i + 1) + "\n";
    out += format_trace(run_oracle(corpus.sentences[i], sys)) + "\n";
  }
  emit(c.settings, "trace.txt", out);
}

TrainConfig train_config(const Settings& s) {
  TrainConfig cfg;
  const std::string& init = s.str("init");
  if (init == "uniform") cfg.init = InitKind::kUniform;
  else if (init == "harmonic") cfg.init = InitKind::kHarmonic;
  else throw CommandError("setting init: expected uniform or harmonic, got '" + init + "'");
  cfg.policy.D = s.integer("depth");
  cfg.policy.C = s.integer("relax_c");
  cfg.policy.validate();
  cfg.length_bias = s.real("length_bias");
  cfg.constraints.root = root_constraint_from_string(s.str("root"));
  cfg.constraints.function_words = s.boolean("function_words");
  cfg.constraints.adp_head = s.boolean("adp_head");
  cfg.em_iterations = s.integer("em_iterations");
  cfg.lbfgs_iterations = s.integer("lbfgs_iterations");
  cfg.sigma2 = s.real("sigma2");
  cfg.tolerance = s.real("tolerance");
  cfg.jobs = s.integer("jobs");
  return cfg;
}

Corpus raw_filtered(const Command& c) {
  Corpus corpus = read_input(c);
  if (c.settings.boolean("strip_punct"))
    for (auto& t : corpus.sentences) t = strip_punctuation(t, kUdPunctTags);
  int ml = c.settings.integer("max_len");
  return filter_length(corpus, ml == kUnbounded ? 0 : ml);
}

void train_dmv(Command& c) {
  TrainConfig cfg = train_config(c.settings);
  Corpus corpus = raw_filtered(c);
  info("training on " + std::to_string(corpus.sentences.size()) + " sentences: " + cfg.describe());
  TrainResult r = train(pos_sequences(corpus), cfg);
  emit(c.settings, "model.txt", write_model(r.model));
  emit(c.settings, "metrics.tsv", metrics_tsv(r.log), false);
  if (c.settings.boolean("evaluate")) {
    double u = evaluate_uas(parse_corpus(r.model, corpus, cfg.jobs), corpus);
    char buf[64];
    std::snprintf(buf, sizeof buf, "UAS\t%.1f\n", u);
    emit(c.settings, "uas.txt", buf, false);
    std::cerr << buf;
  }
}

void parse_cmd(Command& c) {
  const auto& s = c.settings;
  std::string text = read_text(s.str("model"));
  Corpus corpus = read_input(c);
  Corpus out;
  if (text.rfind("# lcdep supervised parser", 0) == 0) {
    SupervisedModel m = read_supervised(text);
    if (!s.str("beam").empty()) m.options.beam = s.integer("beam");
    if (!s.str("depth_bound").empty()) m.options.depth_bound = s.integer("depth_bound");
    if (!s.str("bound_measure").empty()) m.options.measure = bound_measure_from_string(s.str("bound_measure"));
    for (auto& t : corpus.sentences) t = append_root(t);
    out = parse_supervised(m, corpus, s.integer("jobs"));
  } else {
    out = parse_corpus(read_model(text), corpus, s.integer("jobs"));
  }
  emit(s, "parsed.conll", write_conll(out));
}

void eval_uas(Command& c) {
  if (c.inputs.size() != 2) throw CommandError("eval-uas takes PRED and GOLD");
  Corpus pred = read_input(c, 0), gold = read_input(c, 1);
  std::set<std::string> punct;
  if (!c.settings.boolean("keep_punct")) punct = kUdPunctTags;
  char buf[64];
  std::snprintf(buf, sizeof buf, "UAS\t%.1f\n", evaluate_uas(pred, gold, punct));
  emit(c.settings, "uas.txt", buf);
}

void train_supervised(Command& c) {
  const auto& s = c.settings;
  ParserOptions opt;
  opt.system = system_from_string(s.str("system"));
  opt.features = feature_set_from_string(s.str("features"));
  opt.beam = s.integer("beam");
  opt.depth_bound = s.integer("depth_bound");
  opt.measure = bound_measure_from_string(s.str("bound_measure"));
  Corpus corpus = prepared(c);
  std::vector<PerceptronLog> log;
  auto m = train_perceptron(corpus, opt, s.integer("epochs"), static_cast<std::uint64_t>(s.integer("seed")), &log);
  emit(s, "model.txt", write_supervised(m));
  std::string tsv = "epoch\tupdates\ttrain_uas\n";
  for (const auto& r : log) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d\t%d\t%.2f\n", r.epoch, r.updates, r.train_uas);
    tsv += buf;
  }
  emit(s, "metrics.tsv", tsv, false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Left-corner dependency parsing experiments"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> cmds;

  auto make = [&](const std::string& name, const std::string& help, std::function<void(Command&)> run,
                  const std::string& inputs_help) -> Command& {
    auto c = std::make_unique<Command>();
    c->name = name;
    c->app = app.add_subcommand(name, help);
    c->settings.app = c->app;
    c->run = std::move(run);
    c->app->add_option("--config", c->settings.config_path, "key=value settings file; flags override it");
    c->app->add_option("inputs", c->inputs, inputs_help);
    auto& s = c->settings;
    s.add("seed", "1", "random seed");
    s.add("jobs", "1", "worker threads");
    s.add("out", "", "output directory; stdout if empty");
    s.add("pos", "coarse", "POS column: coarse or fine");
    cmds.push_back(std::move(c));
    return *cmds.back();
  };
  auto corpus_keys = [](Settings& s) {
    s.add("max_len", "inf", "drop sentences longer than this");
    s.add("strip_punct", "false", "remove punctuation before analysis");
  };

  {
    auto& c = make("analyze-depth", "stack depth histogram of oracle derivations", analyze_depth, "CoNLL file");
    corpus_keys(c.settings);
    c.settings.add("system", "left-corner", "left-corner, arc-standard or arc-eager");
    c.settings.add("measure", "depth-re", "all, depth-re or depth-sh");
    c.settings.add("relax_c", "1", "exempt constituents of at most C tokens");
    c.settings.add("lang", "", "language label in the TSV");
  }
  {
    auto& c = make("coverage", "token and sentence coverage under depth bounds", coverage, "CoNLL file");
    corpus_keys(c.settings);
    c.settings.add("system", "left-corner", "transition system");
    c.settings.add("measure", "depth-re", "depth-re or raw");
    c.settings.add("bounds", "1,2,3,4", "comma-separated depth bounds");
    c.settings.add("relax_c", "1", "exempt constituents of at most C tokens", "relax");
    c.settings.add("lang", "", "language label in the TSV");
  }
  {
    auto& c = make("random-baseline", "depth histogram over random reorderings", random_baseline_cmd, "CoNLL file");
    corpus_keys(c.settings);
    c.settings.add("system", "left-corner", "transition system");
    c.settings.add("measure", "depth-re", "all, depth-re or depth-sh");
    c.settings.add("trials", "1", "reorderings per sentence");
    c.settings.add("relax_c", "1", "exempt constituents of at most C tokens");
    c.settings.add("lang", "", "language label in the TSV");
  }
  {
    auto& c = make("oracle-trace", "print oracle derivations", oracle_trace, "CoNLL file");
    corpus_keys(c.settings);
    c.settings.add("system", "left-corner", "transition system");
  }
  {
    auto& c = make("train-dmv", "train a featurized DMV with EM", train_dmv, "CoNLL training file");
    corpus_keys(c.settings);
    auto& s = c.settings;
    s.add("init", "uniform", "uniform or harmonic");
    s.add("depth", "inf", "depth bound D");
    s.add("relax_c", "1", "relaxation C");
    s.add("length_bias", "0", "arc length penalty beta");
    s.add("root", "none", "none, verb-or-noun or verb-otherwise-noun");
    s.add("function_words", "false", "function words may not head");
    s.add("adp_head", "false", "ADP must take a dependent");
    s.add("em_iterations", "50", "EM iterations");
    s.add("lbfgs_iterations", "100", "L-BFGS iterations per M-step");
    s.add("sigma2", "10", "Gaussian prior variance");
    s.add("tolerance", "1e-6", "objective change for convergence");
    s.add("evaluate", "false", "report training UAS against the input trees");
  }
  {
    auto& c = make("parse", "parse with a DMV or supervised model", parse_cmd, "CoNLL file");
    c.settings.add("model", "model.txt", "model file");
    c.settings.add("beam", "", "override the supervised beam width");
    c.settings.add("depth_bound", "", "override the supervised depth bound");
    c.settings.add("bound_measure", "", "override the supervised bound measure");
  }
  {
    auto& c = make("eval-uas", "unlabeled attachment score", eval_uas, "PRED and GOLD CoNLL files");
    c.settings.add("keep_punct", "false", "score punctuation tokens too");
  }
  {
    auto& c = make("train-supervised", "train a beam-search perceptron parser", train_supervised,
                   "CoNLL training file");
    corpus_keys(c.settings);
    auto& s = c.settings;
    s.add("system", "left-corner", "transition system");
    s.add("features", "full", "full or limited (left-corner only)");
    s.add("beam", "8", "beam width");
    s.add("epochs", "10", "training epochs");
    s.add("depth_bound", "inf", "decoding depth bound stored with the model");
    s.add("bound_measure", "depth-re", "raw or depth-re");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error\tusage\t" << e.what() << "\n";
    return 2;
  }

  for (auto& c : cmds) {
    if (!c->app->parsed()) continue;
    try {
      c->settings.resolve();
      std::string echo = c->settings.echo();
      std::cerr << "# " << c->name << "\n";
      std::istringstream es(echo);
      for (std::string l; std::getline(es, l);) std::cerr << "# " << l << "\n";
      if (!c->settings.str("out").empty()) emit(c->settings, "config.txt", echo, false);
      c->run(*c);
    } catch (const std::exception& e) {
      std::string msg = e.what();
      for (auto& ch : msg)
        if (ch == '\n' || ch == '\t') ch = ' ';
      std::cerr << "error\t" << c->name << "\t" << msg << "\n";
      return 1;
    }
  }
  return 0;
}
