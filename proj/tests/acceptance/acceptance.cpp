// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "rqbc/adversary.hpp"
#include "rqbc/cli.hpp"
#include "rqbc/discrimination.hpp"
#include "rqbc/protocol.hpp"
#include "rqbc/report.hpp"

using namespace rqbc;

namespace {

class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
    ++count_;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(10);
    os << what << ": got " << got << ", want " << want << " +/- " << tol;
    expect(std::abs(got - want) <= tol, os.str());
  }
  void at_most(double got, double limit, const std::string& what) {
    std::ostringstream os;
    os.precision(10);
    os << what << ": " << got << " > " << limit;
    expect(got <= limit, os.str());
  }
  void note(std::string s) { notes_.push_back(std::move(s)); }

  bool passed() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }
  int count() const { return count_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  int count_ = 0;
};

std::string fmt(double v) { return format_number(v); }

const ReportRow* row(const Report& r, const std::string& quantity) {
  for (const auto& x : r.rows) {
    if (x.quantity == quantity) return &x;
  }
  return nullptr;
}

double row_value(const Report& r, const std::string& quantity) {
  const ReportRow* x = row(r, quantity);
  return x && x->value ? *x->value : std::nan("");
}

void povm_optimality(Checks& c) {
  const Report r = cmd_verify_povm({});
  c.expect(r.all_passed(), "verify-povm reports a failed row");
  c.at_most(row_value(r, "completeness_max_deviation"), 1e-10, "completeness");
  const double gamma = (1.0 + 1.0 / std::numbers::sqrt2) / 8.0;
  c.at_most(gamma_operator(optimal_povm()).max_abs_diff(gamma * Operator::identity(2)), 1e-12,
            "Gamma entrywise deviation");
  for (int i = 1; i <= 4; ++i) {
    const std::string q = "holevo_min_eigenvalue_" + std::to_string(i);
    c.expect(row_value(r, q) >= -1e-10, q + " below -1e-10");
  }
  c.near(win_probability(optimal_povm()), 0.8535533906, 1e-10, "win_probability");
  c.near(row_value(r, "win_probability"), kMu, 1e-12, "reported win_probability");
  c.note("win=" + fmt(row_value(r, "win_probability")) + " gamma_dev=" + fmt(row_value(r, "gamma_max_deviation")));
}

void bound_attained(Checks& c) {
  constexpr std::uint64_t kTrials = 1'000'000;
  const auto opt = estimate_cheat_probability(AttackStrategy::optimal(), 1, kTrials, 0.0, kDefaultSeed);
  const auto uni = estimate_cheat_probability(AttackStrategy::uniform(), 1, kTrials, 0.0, kDefaultSeed);
  const auto fix = estimate_cheat_probability(AttackStrategy::fixed_basis_then_fabricate(), 1, kTrials, 0.0,
                                              kDefaultSeed);
  c.near(opt.estimate, 0.8535534, 0.0015, "optimal n=1");
  c.near(uni.estimate, 0.5, 0.002, "uniform n=1");
  // Measured basis always right, fabricated basis right half the time.
  c.near(fix.estimate, 0.75, 0.002, "fixed-basis n=1");
  c.note("optimal=" + fmt(opt.estimate) + " uniform=" + fmt(uni.estimate) + " fixed=" + fmt(fix.estimate));
}

void bound_at_desk_scale(Checks& c) {
  const auto five = estimate_cheat_probability(AttackStrategy::optimal(), 5, 1'000'000, 0.0, kDefaultSeed);
  c.near(five.estimate, security_bound(5), 0.002, "optimal n=5 vs mu^5");
  int violations = 0;
  for (const char* name : {"optimal", "uniform", "fixed-z", "fixed-x"}) {
    for (int n = 1; n <= 10; ++n) {
      const auto rep = estimate_cheat_probability(parse_attack(name), n, 100'000, 0.0, kDefaultSeed + 1);
      if (rep.bound_violated) ++violations;
      c.expect(!rep.bound_violated, std::string(name) + " n=" + std::to_string(n) + " exceeds mu^n + 4 stderr: " +
                                        fmt(rep.estimate) + " vs " + fmt(rep.bound));
    }
  }
  c.note("n=5 estimate=" + fmt(five.estimate) + " mu^5=" + fmt(security_bound(5)) +
         " violations=" + std::to_string(violations) + "/40");
}

void random_strategies(Checks& c) {
  RandomSource rng(kDefaultSeed);
  double worst_win = 0.0;
  for (int k = 0; k < 1000; ++k) worst_win = std::max(worst_win, win_probability(random_strategy(rng)));
  c.at_most(worst_win, kMu + 1e-9, "max win over random POVMs");
  double worst_ratio = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Operator a = random_psd(2, rng);
    for (int i = 1; i <= 4; ++i) worst_ratio = std::max(worst_ratio, max_confidence_ratio(a, i));
  }
  c.at_most(worst_ratio, kMu + 1e-9, "max confidence ratio over random PSD operators");
  c.note("max_win=" + fmt(worst_win) + " max_ratio=" + fmt(worst_ratio));
}

void collective(Checks& c) {
  const Report good = cmd_collective_check({});
  c.expect(good.all_passed(), "collective-check reports a failed row");
  const auto cert = collective_certificate_n2(1e-10);
  c.expect(cert.certificate.passed, "collective certificate failed at tol 1e-10");
  const double scalar = std::pow(1.0 + 1.0 / std::numbers::sqrt2, 2) / 64.0;
  c.at_most(cert.gamma.max_abs_diff(scalar * Operator::identity(4)), 1e-12, "Gamma_2 entrywise deviation");
  CollectiveCheckOptions bad;
  bad.corrupt = true;
  c.expect(!cmd_collective_check(bad).all_passed(), "corrupted factor still passes");
  c.note("win_2=" + fmt(cert.win_probability) + " worst_eig=" + fmt(cert.certificate.worst_eigenvalue));
}

void lemma2(Checks& c) {
  const auto one = run_lemma2_demo(1, 100'000, kDefaultSeed);
  c.near(one.success_frequency, 0.8536, 0.004, "n=1 reduction");
  const auto two = run_lemma2_demo(2, 100'000, kDefaultSeed);
  c.at_most(two.success_frequency, kMu + 4 * two.standard_error, "n=2 conditional success");
  RandomSource rng(kDefaultSeed);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const PureState psi = random_state(2, rng);
    worst = std::max(worst, std::abs(1.0 - fidelity(teleport_demo(psi, rng), psi)));
  }
  c.at_most(worst, 1e-12, "teleport fidelity deviation");
  c.note("n1=" + fmt(one.success_frequency) + " n2=" + fmt(two.success_frequency) +
         " fidelity_dev=" + fmt(worst));
}

void azuma_noise(Checks& c) {
  c.near(azuma_bound(100, 0.05), 0.84234, 1e-4, "azuma(100, 0.05)");
  const auto tail = azuma_tail_check(AttackStrategy::optimal(), 1000, {0.02, 0.05}, 10'000, kDefaultSeed);
  for (const auto& p : tail.points) {
    c.expect(p.satisfied, "tail at eps=" + fmt(p.epsilon) + ": " + fmt(p.tail_fraction) + " > " + fmt(p.azuma));
  }
  const Report r = cmd_verify_povm({});
  c.near(row_value(r, "noise_threshold"), 0.1464466094, 1e-9, "noise_threshold");
  const std::string text = render(r, ReportFormat::Text);
  c.expect(text.find("0.1464466094") != std::string::npos, "noise_threshold not printed as 0.1464466094");
  c.note("azuma=" + fmt(azuma_bound(100, 0.05)) + " tails=" + fmt(tail.points[0].tail_fraction) + "," +
         fmt(tail.points[1].tail_fraction));
}

void completeness_hiding(Checks& c) {
  int rejected = 0;
  int acausal = 0;
  std::array<std::array<double, 256>, 2> counts{};
  for (std::uint64_t r = 0; r < 10'000; ++r) {
    RunConfig cfg;
    cfg.n = 1 + static_cast<int>(splitmix64(r) % 1000);
    cfg.bit = static_cast<int>(r % 2);
    RandomSource rng = RandomSource::derive(kDefaultSeed, r);
    const Transcript t = run_honest(cfg, rng);
    if (!t.verdict.accepted()) ++rejected;
    for (const auto& e : t.events) {
      if (!e.result.delivered || !causally_reaches(e.emitted_at, e.received_at)) ++acausal;
    }
    for (auto b : t.ciphertext_q0) counts[static_cast<std::size_t>(cfg.bit)][b] += 1;
    for (auto b : t.ciphertext_q1) counts[static_cast<std::size_t>(cfg.bit)][b] += 1;
  }
  c.expect(rejected == 0, std::to_string(rejected) + " honest runs rejected");
  c.expect(acausal == 0, std::to_string(acausal) + " transcript messages outside the light cone");

  // Bit 0 vs bit 1 ciphertext byte frequencies, 2 x 256 contingency table.
  double n0 = 0.0, n1 = 0.0;
  for (std::size_t v = 0; v < 256; ++v) {
    n0 += counts[0][v];
    n1 += counts[1][v];
  }
  double stat = 0.0;
  for (std::size_t v = 0; v < 256; ++v) {
    const double col = counts[0][v] + counts[1][v];
    const double e0 = col * n0 / (n0 + n1);
    const double e1 = col * n1 / (n0 + n1);
    stat += (counts[0][v] - e0) * (counts[0][v] - e0) / e0 + (counts[1][v] - e1) * (counts[1][v] - e1) / e1;
  }
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(255.0), stat));
  c.expect(p > 0.01, "chi-square p-value " + fmt(p));

  const Geometry g = standard_geometry(1.0);
  const auto leak = deliver(Message{"Alice@Q0", "Alice@Q1", "leak", {0}}, g.q0, g.q1);
  c.expect(!leak.delivered, "Q0 -> Q1 delivery was not refused");
  c.note("rejected=" + std::to_string(rejected) + " chi2=" + fmt(stat) + " p=" + fmt(p));
}

void loss_tolerance(Checks& c) {
  std::string summary;
  for (auto [f, n] : {std::pair{0.5, 20}, std::pair{0.9, 100}}) {
    const auto rep = loss_attack_check(f, n, 100'000, kDefaultSeed);
    const std::string tag = "f=" + fmt(f) + " n=" + std::to_string(n);
    c.expect(!rep.bound_violated, tag + ": bound violated");
    c.near(rep.estimate, rep.mixture_oracle, 4 * rep.standard_error, tag + " vs E[mu^M]");
    summary += tag + ": " + fmt(rep.estimate) + " vs " + fmt(rep.mixture_oracle) + "  ";
  }
  c.note(summary);
}

void determinism(Checks& c) {
  const std::vector<std::vector<std::string>> commands = {
      {"verify-povm"},
      {"security-table", "--azuma", "100:0.05"},
      {"azuma-table", "--n", "200", "--empirical", "--trials", "2000"},
      {"honest-run", "--n", "200", "--noise", "0.05", "--tolerance", "0.1"},
      {"cheat-run", "--n", "4", "--trials", "20000", "--tolerances", "0,0.1"},
      {"loss-check", "--trials", "5000"},
      {"collective-check"},
      {"lemma2-demo", "--n", "2", "--trials", "5000"},
  };
  for (auto cmd : commands) {
    cmd.insert(cmd.begin(), "rqbc");
    cmd.insert(cmd.end(), {"--format", "json", "--seed", "77"});
    std::ostringstream a, b, err;
    run_cli(cmd, a, err);
    run_cli(cmd, b, err);
    c.expect(!a.str().empty() && a.str() == b.str(), cmd[1] + " json differs between identical runs");
  }
  c.note(std::to_string(commands.size()) + " commands compared");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Checks&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "POVM optimality certificate", povm_optimality},
      {2, "Monte Carlo attains the single-state bound", bound_attained},
      {3, "mu^n bound at desk scale", bound_at_desk_scale},
      {4, "random strategies respect mu", random_strategies},
      {5, "collective certificate", collective},
      {6, "teleportation reduction", lemma2},
      {7, "Azuma tail and noise threshold", azuma_noise},
      {8, "honest completeness and hiding", completeness_hiding},
      {9, "loss tolerance", loss_tolerance},
      {10, "determinism", determinism},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    Checks c;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%d checks, %.1fs)\n", c.passed() ? "PASS" : "FAIL", cr.id, cr.name,
                c.count(), secs);
    for (const auto& n : c.notes()) std::printf("       %s\n", n.c_str());
    for (const auto& f : c.failures()) std::printf("       failed: %s\n", f.c_str());
    std::fflush(stdout);
    if (!c.passed()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
