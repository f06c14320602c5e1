// Acceptance gate: one PASS/FAIL/SKIP line per criterion with its measured
// values, tolerances and runtime budget. Exit status is nonzero on any FAIL.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dzhate/annotation.hpp"
#include "dzhate/config.hpp"
#include "dzhate/corpus.hpp"
#include "dzhate/io.hpp"
#include "dzhate/metrics.hpp"
#include "dzhate/ncd.hpp"
#include "dzhate/svm.hpp"
#include "dzhate/textprep.hpp"
#include "dzhate/translit.hpp"
#include "dzhate/workflow.hpp"
#include "support.hpp"

using namespace dzhate;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::fail;
  std::string detail;
};

Outcome check(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// --- criteria ----------------------------------------------------------------

Outcome metrics_oracle() {
  constexpr double kTol = 1e-4;
  const std::vector<Label> gold{Label::hateful, Label::hateful, Label::non_hateful, Label::non_hateful};
  const std::vector<Label> pred{Label::hateful, Label::non_hateful, Label::non_hateful, Label::non_hateful};
  const auto r = metrics::evaluate(gold, pred);
  bool ok = std::abs(r.accuracy - 0.75) <= kTol && std::abs(r.per_class[1].f1.value - 2.0 / 3.0) <= kTol &&
            std::abs(r.per_class[1].f1.value - 0.6667) <= kTol;

  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<Label> g, p, gs, ps;
    for (std::size_t n = len(rng); n > 0; --n) {
      g.push_back(label_from_int(bit(rng)));
      p.push_back(label_from_int(bit(rng)));
      gs.push_back(label_from_int(1 - to_int(g.back())));
      ps.push_back(label_from_int(1 - to_int(p.back())));
    }
    const auto a = metrics::evaluate(g, p);
    const auto b = metrics::evaluate(gs, ps);
    bool same = a.accuracy == b.accuracy;
    for (int c = 0; c < 2; ++c) {
      same = same && a.per_class[c].precision.value == b.per_class[1 - c].precision.value &&
             a.per_class[c].recall.value == b.per_class[1 - c].recall.value &&
             a.per_class[c].f1.value == b.per_class[1 - c].f1.value;
    }
    violations += !same;
  }
  ok = ok && violations == 0;
  return check(ok, "accuracy=" + num(r.accuracy) + " F1_1=" + num(r.per_class[1].f1.value) + " tol=1e-4" +
                       " swap_violations=" + std::to_string(violations) + "/1000");
}

Outcome pipeline_invariants() {
  auto cfg = RunConfig::defaults();
  const textprep::Pipeline p(cfg.pipeline_config());
  std::mt19937_64 rng(20240611);
  int bad = 0;
  for (int i = 0; i < 500; ++i) {
    const std::string in = testing_support::random_mixed_text(rng);
    const std::string once = p(in);
    if (p(once) != once) ++bad;
    for (char32_t c : unicode::decode(once)) {
      if (!(unicode::is_arabic_letter(c) || c == U' ' || unicode::is_emoji(c))) {
        ++bad;
        break;
      }
    }
  }
  int golden_bad = 0, golden_n = 0;
  const auto text = io::read_file(std::filesystem::path(DZHATE_TEST_DATA) / "normalization_golden.tsv");
  io::for_each_line(text, [&](std::string_view line, std::size_t, bool) {
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    ++golden_n;
    if (tab == std::string_view::npos || textprep::normalize_arabic(line.substr(0, tab)) != line.substr(tab + 1)) {
      ++golden_bad;
    }
  });
  const bool pairs = textprep::normalize_arabic("گ") == "ك" && textprep::normalize_arabic("١") == "1" &&
                     textprep::normalize_arabic("مُحَمَّد") == "محمد";
  return check(bad == 0 && golden_bad == 0 && golden_n > 0 && pairs,
               "random_violations=" + std::to_string(bad) + "/500 golden_mismatch=" + std::to_string(golden_bad) +
                   "/" + std::to_string(golden_n));
}

Outcome split_properties() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(10, 1000);
  std::uniform_real_distribution<double> frac(0.1, 0.9);
  int bad_partition = 0, bad_dev = 0, bad_det = 0;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = size(rng);
    const std::size_t ones = std::clamp<std::size_t>(static_cast<std::size_t>(frac(rng) * n), 3, n - 3);
    const Corpus c = testing_support::labeled_corpus(n, ones, rng);
    const double tr = 0.5 + 0.4 * frac(rng) / 0.9;
    const double va = (1 - tr) * frac(rng);
    const SplitRatios r{tr, va, 1 - tr - va};
    const auto s = stratified_split(c, r, static_cast<std::uint64_t>(trial));
    std::multiset<std::string> seen;
    const Corpus* parts[3] = {&s.train, &s.validation, &s.test};
    const double ratios[3] = {r.train, r.validation, r.test};
    std::array<double, 2> total{0, 0};
    for (const auto& d : c) total[to_int(*d.label)] += 1;
    for (int i = 0; i < 3; ++i) {
      std::array<double, 2> got{0, 0};
      for (const auto& d : *parts[i]) {
        seen.insert(d.id);
        got[to_int(*d.label)] += 1;
      }
      for (int cl = 0; cl < 2; ++cl) {
        const double dev = std::abs(got[cl] - ratios[i] * total[cl]);
        worst = std::max(worst, dev);
        bad_dev += dev > 1.0;
      }
    }
    std::set<std::string> unique(seen.begin(), seen.end());
    bad_partition += seen.size() != c.size() || unique.size() != c.size();
    const auto again = stratified_split(c, r, static_cast<std::uint64_t>(trial));
    for (int i = 0; i < 3; ++i) {
      const Corpus* other[3] = {&again.train, &again.validation, &again.test};
      bad_det += !(*other[i] == *parts[i]);
    }
  }
  return check(bad_partition == 0 && bad_dev == 0 && bad_det == 0,
               "configs=50 partition_errors=" + std::to_string(bad_partition) + " max_class_deviation=" +
                   num(worst, 3) + " (limit 1) nondeterministic=" + std::to_string(bad_det));
}

std::vector<std::string> ncd_fixture_lines() {
  std::vector<std::string> out;
  io::for_each_line(io::read_file(testing_support::fixture("ncd_lines.txt")),
                    [&](std::string_view l, std::size_t, bool) {
                      if (!l.empty()) out.emplace_back(l);
                    });
  return out;
}

Outcome ncd_properties() {
  constexpr double kSelfMax = 0.15, kPairMax = 1.2;
  const auto lines = ncd_fixture_lines();
  double self_worst = 0, lo = 1e9, hi = -1e9;
  for (const auto& l : lines) {
    if (l.size() >= 100) self_worst = std::max(self_worst, ncd::ncd(l, l));
    for (const auto& m : lines) {
      const double d = ncd::ncd(l, m);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  std::vector<Document> docs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detect_script(lines[i]) != Script::arabic) continue;  // clean_text admits no Latin
    auto d = Document::make("n" + std::to_string(i), lines[i]);
    d.clean_text = lines[i];
    d.set_label(i % 2 ? Label::hateful : Label::non_hateful, LabelSource::manual);
    docs.push_back(d);
  }
  const auto index = ncd::NcdIndex::build(Corpus(docs));
  int mismatches = 0;
  for (const auto& q : lines) {
    const auto seq = ncd::distances(index, q, 1);
    const auto par = ncd::distances(index, q, 4);
    mismatches += std::memcmp(seq.data(), par.data(), seq.size() * sizeof(double)) != 0;
  }
  return check(self_worst <= kSelfMax && lo >= 0.0 && hi <= kPairMax && mismatches == 0,
               "max_self_ncd=" + num(self_worst) + " (limit 0.15) range=[" + num(lo) + "," + num(hi) +
                   "] (limit [0,1.2]) parallel_mismatch=" + std::to_string(mismatches));
}

Outcome knn_sanity() {
  constexpr double kMinAccuracy = 0.90;
  const Corpus c = load_corpus(testing_support::fixture("disjoint_200.csv"));
  const auto index = ncd::NcdIndex::build(c);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    ncd::KnnOptions opt;
    opt.k = 3;
    opt.exclude = i;
    opt.threads = 0;
    ok += ncd::knn_classify(index, *c[i].clean_text, opt).label == *c[i].label;
  }
  const double acc = static_cast<double>(ok) / static_cast<double>(c.size());
  return check(c.size() == 200 && acc >= kMinAccuracy,
               "docs=" + std::to_string(c.size()) + " k=3 loo_accuracy=" + num(acc) + " (min 0.90)");
}

Outcome svm_checks() {
  constexpr double kRelTol = 1e-4;
  const Corpus c = load_corpus(testing_support::fixture("separable_60.csv"));
  const auto bundle = workflow::train_svm(c, {}, {});
  std::size_t ok = 0;
  for (const auto& d : c) ok += bundle.classify(*d.clean_text).label == *d.label;
  const double train_acc = static_cast<double>(ok) / static_cast<double>(c.size());

  // finite differences at a random smooth point of the training objective
  const auto texts = workflow::clean_texts(c);
  std::vector<vectorize::SparseVector> X;
  for (const auto& t : texts) X.push_back(bundle.vectorizer.transform(t));
  const auto y = workflow::labels(c);
  const auto cw = svm::class_weights(y, svm::ClassWeight::balanced);
  const std::size_t dim = bundle.vectorizer.vocabulary_size();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 0.2);
  double worst = 0;
  int points = 0;
  for (int attempt = 0; attempt < 50 && points < 5; ++attempt) {
    std::vector<double> w(dim);
    for (double& v : w) v = g(rng);
    const double b = g(rng);
    bool smooth = true;
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (std::abs(svm::sign_of(y[i]) * (svm::dot(w, X[i]) + b) - 1.0) < 1e-3) smooth = false;
    }
    if (!smooth) continue;
    ++points;
    const double lambda = 0.01, h = 1e-6;
    const auto grad = svm::objective_subgradient(w, b, X, y, lambda, cw);
    for (std::size_t k = 0; k <= dim; k += std::max<std::size_t>(1, dim / 25)) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (k < dim) {
        wp[k] += h;
        wm[k] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double fd = (svm::objective(wp, bp, X, y, lambda, cw) - svm::objective(wm, bm, X, y, lambda, cw)) / (2 * h);
      const double an = k < dim ? grad.w[k] : grad.b;
      worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
  }
  const auto again = workflow::train_svm(c, {}, {});
  const bool det = again.model.weights().size() == bundle.model.weights().size() &&
                   std::memcmp(again.model.weights().data(), bundle.model.weights().data(),
                               bundle.model.weights().size() * sizeof(double)) == 0 &&
                   std::bit_cast<std::uint64_t>(again.model.bias()) == std::bit_cast<std::uint64_t>(bundle.model.bias());
  return check(train_acc == 1.0 && points > 0 && worst <= kRelTol && det,
               "train_accuracy=" + num(train_acc) + " grad_rel_err=" + sci(worst) + " (limit 1e-4, " +
                   std::to_string(points) + " points) bit_exact=" + (det ? "yes" : "no"));
}

Outcome transliteration() {
  const auto a = translit::transliterate("3ib").text;
  const auto b = translit::transliterate("khouya").text;
  const auto phrase = translit::transliterate("ma tech-rich zit el aliha").text;
  const auto dist = testing_support::levenshtein(phrase, "ما تشريش زيت الالهة");
  return check(a == "عيب" && b == "خويا" && dist <= 3,
               "3ib->" + a + " khouya->" + b + " phrase->" + phrase + " levenshtein=" + std::to_string(dist) +
                   " (limit 3)");
}

Outcome reference_corpus() {
  constexpr double kSvmTarget = 0.83, kSvmTol = 0.03, kKnnTarget = 0.67, kKnnTol = 0.05;
  const char* path = std::getenv("DZHATE_REFERENCE_CORPUS");
  if (!path || !*path) return {Verdict::skip, "set DZHATE_REFERENCE_CORPUS to a labeled corpus file to run"};
  const auto cfg = RunConfig::defaults();
  const textprep::Pipeline pipeline(cfg.pipeline_config());
  const auto rules = cfg.rule_table();
  const Corpus raw = load_corpus(path);
  const Corpus prepared = workflow::preprocess(raw, pipeline, rules, true);
  std::vector<Document> keep;
  for (const auto& d : prepared) {
    if (d.label && d.clean_text && !d.clean_text->empty()) keep.push_back(d);
  }
  const auto split = stratified_split(Corpus(std::move(keep)), cfg.ratios, cfg.split_seed);
  const auto bundle = workflow::train_svm(split.train, cfg.tfidf, cfg.svm);
  const auto gold = workflow::labels(split.test);
  std::vector<Label> svm_pred, knn_pred;
  const auto index = ncd::NcdIndex::build(split.train, cfg.ncd_params());
  for (const auto& d : split.test) {
    svm_pred.push_back(bundle.classify(*d.clean_text).label);
    ncd::KnnOptions opt;
    opt.k = cfg.k;
    opt.threads = 0;
    knn_pred.push_back(ncd::knn_classify(index, *d.clean_text, opt).label);
  }
  const double svm_acc = metrics::evaluate(gold, svm_pred).accuracy;
  const double knn_acc = metrics::evaluate(gold, knn_pred).accuracy;
  return check(std::abs(svm_acc - kSvmTarget) <= kSvmTol && std::abs(knn_acc - kKnnTarget) <= kKnnTol,
               "docs=" + std::to_string(raw.size()) + " svm_test_accuracy=" + num(svm_acc) +
                   " (target 0.83+-0.03) knn_test_accuracy=" + num(knn_acc) + " (target 0.67+-0.05)");
}

Outcome annotation_service() {
  const auto lex = autolabel::parse_lexicon("كلب\nحمار\n");
  std::mt19937_64 rng(200);
  int mismatches = 0, restart_mismatches = 0, non_manual = 0, roundtrip_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Document> docs;
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 12);
    for (std::size_t i = 0; i < n; ++i) {
      auto d = Document::make("c" + std::to_string(i), "نص " + std::to_string(i));
      d.clean_text = i % 3 == 0 ? "يا كلب روح" : "صباح الخير";
      docs.push_back(d);
    }
    const Corpus c = autolabel::auto_annotate(Corpus(std::move(docs), "accept"), lex);
    testing_support::ScratchDir dir("accept");
    const auto out = dir / "validated.csv";
    std::vector<annotation::Event> attempted;
    {
      annotation::Session s(c, lex, {out, "accept"});
      std::uniform_int_distribution<std::size_t> steps(0, 30), pick(0, n);
      std::uniform_int_distribution<int> act(0, 3);
      for (std::size_t k = steps(rng); k > 0; --k) {
        const std::size_t i = pick(rng);
        const std::string id = i == n ? "missing" : c[i].id;
        const Label al = i == n ? Label::hateful : *c[i].label;
        const Label other = al == Label::hateful ? Label::non_hateful : Label::hateful;
        annotation::Action a = annotation::Action::skip;
        std::optional<Label> label;
        switch (act(rng)) {
          case 0: a = annotation::Action::confirm; label = al; break;
          case 1: a = annotation::Action::correct; label = other; break;
          case 2: break;
          default: a = annotation::Action::confirm; label = other; break;
        }
        attempted.push_back({k, id, a, label, "accept", 0});
        try {
          s.submit(id, label, a);
        } catch (const annotation::Rejected&) {
        }
      }
      mismatches += !(*s.snapshot() == annotation::replay(c, attempted));
      try {
        const std::string csv = s.export_csv();
        const Corpus back = load_corpus(out);
        for (const auto& d : back) non_manual += d.label_source != LabelSource::manual;
        roundtrip_bad += serialize_corpus(back, CorpusFormat::csv) != csv;
      } catch (const annotation::Rejected&) {
      }
    }
    annotation::Session restarted(c, lex, {out, "accept"});
    restart_mismatches += !(*restarted.snapshot() == annotation::replay(c, attempted));
  }
  return check(mismatches == 0 && restart_mismatches == 0 && non_manual == 0 && roundtrip_bad == 0,
               "sequences=200 replay_mismatch=" + std::to_string(mismatches) + " restart_mismatch=" +
                   std::to_string(restart_mismatches) + " non_manual_exported=" + std::to_string(non_manual) +
                   " roundtrip_diff=" + std::to_string(roundtrip_bad));
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"metrics oracle and label-swap symmetry", 1, metrics_oracle},
      {"pipeline idempotence, charset invariants, normalization golden", 5, pipeline_invariants},
      {"stratified split partition, deviation, determinism", 5, split_properties},
      {"NCD self-distance, range, parallel determinism", 30, ncd_properties},
      {"gzip+KNN leave-one-out on disjoint corpus", 120, knn_sanity},
      {"SVM separable fit, gradient check, determinism", 30, svm_checks},
      {"transliteration traces and phrase tolerance", 1, transliteration},
      {"corpus-level accuracy targets (conditional)", 1800, reference_corpus},
      {"annotation replay and export round-trip", 30, annotation_service},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.verdict != Verdict::skip && secs > c.budget_s) {
      o.verdict = Verdict::fail;
      o.detail += " [over time budget]";
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::printf("[%s] %s | %s | %.3fs (budget %.0fs)\n", tag, c.name, o.detail.c_str(), secs, c.budget_s);
    failures += o.verdict == Verdict::fail;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
