#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcdep/analysis.hpp"
#include "lcdep/induction.hpp"
#include "lcdep/supervised.hpp"
#include "lcdep/transition.hpp"
#include "lcdep/treebank.hpp"

namespace py = pybind11;
using namespace lcdep;

namespace {

Corpus to_corpus(const std::vector<DepTree>& trees) {
  Corpus c;
  c.sentences = trees;
  return c;
}

int bound_arg(const py::object& o) { return o.is_none() ? kUnbounded : o.cast<int>(); }

}  // namespace

PYBIND11_MODULE(_lcdep, m) {
  m.doc() = "Left-corner dependency parsing";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<TransitionError>(m, "TransitionError", PyExc_ValueError);

  py::class_<DepTree>(m, "DepTree")
      .def(py::init([](const std::vector<int>& heads, const std::vector<std::string>& tags,
                       const std::vector<std::string>& forms) {
             DepTree t = DepTree::from_heads(heads, tags);
             if (!forms.empty()) {
               if (forms.size() != heads.size()) throw py::value_error("forms and heads differ in length");
               std::vector<Token> toks = t.tokens();
               for (size_t i = 0; i < toks.size(); ++i) toks[i].form = forms[i];
               t = DepTree(std::move(toks));
             }
             t.validate();
             return t;
           }),
           py::arg("heads"), py::arg("tags") = std::vector<std::string>{},
           py::arg("forms") = std::vector<std::string>{},
           "heads[i] is the head of token i+1; 0 marks the root.")
      .def("__len__", &DepTree::size)
      .def_property_readonly("heads", [](const DepTree& t) {
        auto h = t.heads();
        return std::vector<int>(h.begin() + 1, h.end());
      })
      .def_property_readonly("tags", &DepTree::tags)
      .def_property_readonly("forms", [](const DepTree& t) {
        std::vector<std::string> f;
        for (const auto& k : t.tokens()) f.push_back(k.form);
        return f;
      })
      .def_property_readonly("root_appended", &DepTree::root_appended)
      .def("is_projective", [](const DepTree& t) { return is_projective(t); })
      .def("projectivize", [](const DepTree& t) { return projectivize(t); })
      .def("__repr__", [](const DepTree& t) { return "<DepTree n=" + std::to_string(t.size()) + ">"; });

  m.def("append_root", [](const DepTree& t) { return append_root(t); });
  m.def("parse_conll", [](const std::string& text) { return parse_conll(text).sentences; }, py::arg("text"));
  m.def("write_conll", [](const std::vector<DepTree>& trees) { return write_conll(to_corpus(trees)); });

  m.def(
      "oracle_trace",
      [](const DepTree& t, const std::string& system) {
        OracleTrace tr = run_oracle(t, system_from_string(system));
        py::list steps;
        for (const auto& s : tr.steps)
          steps.append(py::make_tuple(s.action, s.depth, s.phase == StepPhase::kShift ? "shift" : "reduce"));
        py::dict d;
        d["steps"] = steps;
        d["heads"] = std::vector<int>(tr.heads.begin() + 1, tr.heads.end());
        d["max_depth_re"] = tr.max_depth_re;
        d["max_depth_sh"] = tr.max_depth_sh;
        return d;
      },
      py::arg("tree"), py::arg("system") = "left-corner",
      "Oracle derivation of a projective tree: steps as (action, depth, phase).");

  m.def(
      "coverage",
      [](const std::vector<DepTree>& trees, const std::vector<int>& bounds, int relax_c, bool prepare) {
        Corpus c = to_corpus(trees);
        if (prepare) c = prepare_corpus(c, {});
        py::list rows;
        for (const auto& r : coverage_report(c, bounds, relax_c)) {
          py::dict d;
          d["bound"] = r.bound;
          d["token_pct"] = r.token_pct;
          d["sent_pct"] = r.sent_pct;
          rows.append(d);
        }
        return rows;
      },
      py::arg("trees"), py::arg("bounds") = std::vector<int>{1, 2, 3, 4}, py::arg("relax_c") = 1,
      py::arg("prepare") = true, "Left-corner depth_re coverage; prepare projectivizes and appends $.");

  m.def(
      "depth_histogram",
      [](const std::vector<DepTree>& trees, const std::string& system, const std::string& measure, int relax_c) {
        Corpus c = prepare_corpus(to_corpus(trees), {});
        return depth_histogram(c, system_from_string(system), measure_from_string(measure), relax_c).counts;
      },
      py::arg("trees"), py::arg("system") = "left-corner", py::arg("measure") = "re", py::arg("relax_c") = 1);

  py::class_<DmvModel>(m, "DmvModel")
      .def("decode", [](const DmvModel& mm, const std::vector<std::string>& tags) { return decode(mm, tags); })
      .def("write", [](const DmvModel& mm) { return write_model(mm); })
      .def_static("read", [](const std::string& s) { return read_model(s); })
      .def_readonly("config", &DmvModel::config);

  m.def(
      "train_dmv",
      [](const std::vector<std::vector<std::string>>& corpus, const std::string& init, py::object depth, int relax_c,
         double length_bias, const std::string& root, bool function_words, int em_iterations, int jobs) {
        TrainConfig cfg;
        cfg.init = init == "harmonic" ? InitKind::kHarmonic : InitKind::kUniform;
        if (init != "harmonic" && init != "uniform") throw py::value_error("init must be uniform or harmonic");
        cfg.policy = {bound_arg(depth), relax_c};
        cfg.policy.validate();
        cfg.length_bias = length_bias;
        cfg.constraints.root = root_constraint_from_string(root);
        cfg.constraints.function_words = function_words;
        cfg.em_iterations = em_iterations;
        cfg.jobs = jobs;
        TrainResult r;
        {
          py::gil_scoped_release nogil;
          r = train(corpus, cfg);
        }
        std::vector<double> objective;
        for (const auto& l : r.log) objective.push_back(l.objective);
        return py::make_tuple(r.model, objective);
      },
      py::arg("corpus"), py::arg("init") = "uniform", py::arg("depth") = py::none(), py::arg("relax_c") = 1,
      py::arg("length_bias") = 0.0, py::arg("root") = "none", py::arg("function_words") = false,
      py::arg("em_iterations") = 50, py::arg("jobs") = 1,
      "Featurized DMV trained with EM on POS sequences. Returns (model, objective per iteration).");

  py::class_<SupervisedModel>(m, "SupervisedModel")
      .def("parse",
           [](const SupervisedModel& mm, const DepTree& t, py::object depth_bound) {
             SupervisedModel x = mm;
             if (!depth_bound.is_none()) x.options.depth_bound = depth_bound.cast<int>();
             return beam_decode(t.root_appended() ? t : append_root(t), x);
           },
           py::arg("tree"), py::arg("depth_bound") = py::none())
      .def("write", [](const SupervisedModel& mm) { return write_supervised(mm); })
      .def_static("read", [](const std::string& s) { return read_supervised(s); });

  m.def(
      "train_supervised",
      [](const std::vector<DepTree>& trees, const std::string& system, const std::string& features, int beam,
         int epochs, std::uint64_t seed) {
        ParserOptions opt;
        opt.system = system_from_string(system);
        opt.features = feature_set_from_string(features);
        opt.beam = beam;
        Corpus c = prepare_corpus(to_corpus(trees), {});
        py::gil_scoped_release nogil;
        return train_perceptron(c, opt, epochs, seed);
      },
      py::arg("trees"), py::arg("system") = "left-corner", py::arg("features") = "full", py::arg("beam") = 8,
      py::arg("epochs") = 10, py::arg("seed") = 1);

  m.def(
      "uas",
      [](const std::vector<DepTree>& pred, const std::vector<DepTree>& gold, bool skip_punct) {
        return evaluate_uas(pred, gold, skip_punct ? kUdPunctTags : std::set<std::string>{});
      },
      py::arg("pred"), py::arg("gold"), py::arg("skip_punct") = true);
}
