#pragma once

// Pointwise verification of the algebraic identities satisfied by an induced
// (a,eps)f structure, and a seeded sweep that aggregates them into a report.

#include "apstruct/induced.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace apstruct {

inline constexpr double kInfTol = std::numeric_limits<double>::infinity();

/// Identity names produced by check_structure_identities, in report order.
///   p_squared          P^2 X = eps (X - sum u_a(X) xi_a)
///   u_of_p             u_a(P X) = -sum_b a_ba u_b(X)
///   a_symmetry         a_ab = eps a_ba
///   u_of_xi            u_a(xi_b) = delta_ab - eps (a^2)_ab
///   p_of_xi            P xi_a = -sum_b a_ab xi_b
///   u_is_gram          u_a(X) = <X, xi_a>
///   p_self_adjoint     <P X, Y> = eps <X, P Y>
///   p_isometry_defect  <P X, P Y> = <X, Y> - sum u_a(X) u_a(Y)
const std::vector<std::string>& structure_identity_names();

struct NamedResidual {
    std::string name;
    double value = 0;
};

/// Aggregate of one identity over many samples. pass = max_abs_err < tol.
struct ResidualStat {
    double max_abs_err = 0;
    double mean_abs_err = 0;
    std::int64_t samples = 0;
    double tol = kInfTol;
    bool pass = true;
    /// Reported-only entries do not affect ResidualReport::pass().
    bool asserted = true;

    friend bool operator==(const ResidualStat&, const ResidualStat&) = default;
};

/// Running max/sum of absolute residuals. merge() in a fixed order keeps the
/// result independent of how samples were distributed across threads.
class ResidualTally {
public:
    void add(double value);
    void merge(const ResidualTally& other);
    [[nodiscard]] ResidualStat finish(double tol, bool asserted) const;

private:
    double max_ = 0;
    double sum_ = 0;
    std::int64_t count_ = 0;
    bool nan_ = false;
};

/// Ordered name -> tally map used while sweeping.
class TallySet {
public:
    void add(const std::string& name, double value);
    void add(const std::vector<NamedResidual>& values, const std::string& prefix = {});
    void merge(const TallySet& other);
    [[nodiscard]] const std::vector<std::pair<std::string, ResidualTally>>& entries() const { return entries_; }

private:
    ResidualTally& slot(const std::string& name);
    std::vector<std::pair<std::string, ResidualTally>> entries_;
};

/// Tolerances by category, with optional per-identity overrides keyed by the
/// full report name (e.g. "oracle.p_squared").
struct ToleranceMap {
    double algebraic = 1e-10;
    double composed = 1e-9;
    double agreement = 1e-10;
    double normality = 5e-7;
    double weingarten_scalar = 5e-8;
    double weingarten_commute = 5e-7;
    double weingarten_self_adjoint = 1e-7;
    double normal_connection = 5e-7;
    std::map<std::string, double> overrides;

    [[nodiscard]] double lookup(const std::string& name, double category_default) const;
    /// Every category and override set to +infinity.
    static ToleranceMap infinite();
};

struct ReportMetadata {
    SubmanifoldSpec spec = SubmanifoldSpec::hypersphere(1, 1, 1.0);
    SignPattern signs;
    std::uint64_t seed = 0;
    int n_points = 0;
    int n_vectors = 0;

    friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct ResidualReport {
    ReportMetadata metadata;
    std::vector<std::pair<std::string, ResidualStat>> entries;

    [[nodiscard]] const ResidualStat* find(const std::string& name) const;
    [[nodiscard]] bool pass() const;
    /// Appends finished tallies; the category tolerance applies unless overridden.
    void append(const TallySet& tallies, const ToleranceMap& tols, double category_tol, bool asserted);
    void append(const std::string& name, const ResidualTally& tally, const ToleranceMap& tols, double category_tol,
                bool asserted);

    friend bool operator==(const ResidualReport&, const ResidualReport&) = default;
};

/// The eight structure identities at one (X, Y) pair; each value is the max
/// absolute violation. P^2 is p_apply applied twice.
std::vector<NamedResidual> check_structure_identities(const InducedStructure& s, const AmbientVector& X,
                                                      const AmbientVector& Y, double eps = 1.0);

/// max |P^3 X - (eps P X + sum_ab a_ab <X, xi_b> xi_a)|.
double check_cubic_identity(const InducedStructure& s, const AmbientVector& X, double eps = 1.0);

/// Max componentwise deviations between two structures at the same point:
/// "a", "xi", and, at X, "u" and "p".
std::vector<NamedResidual> compare_structures(const InducedStructure& lhs, const InducedStructure& rhs,
                                              const AmbientVector& X);

/// Per-sample-point stream derived from (seed, index).
Rng point_stream(std::uint64_t seed, std::uint64_t index);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

struct SuiteOptions {
    int n_points = 1000;
    int n_vectors = 10;
    std::uint64_t seed = 0;
    ToleranceMap tols;
    unsigned threads = 0;
};

/// Samples points and tangent pairs and aggregates the structure identities
/// (for the oracle and, with uniform signs, the closed forms), the cubic
/// identity and closed-form/oracle agreement.
ResidualReport run_suite(const SubmanifoldSpec& spec, const SignPattern& signs, const SuiteOptions& opts);

}  // namespace apstruct
