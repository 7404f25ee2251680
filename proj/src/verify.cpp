#include "apstruct/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace apstruct {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

AmbientVector combine(const std::vector<AmbientVector>& vs, const Eigen::VectorXd& w, Shape shape) {
    AmbientVector out(shape);
    for (int i = 0; i < w.size(); ++i) {
        out += w[i] * vs[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace

const std::vector<std::string>& structure_identity_names() {
    static const std::vector<std::string> names{"p_squared", "u_of_p",         "a_symmetry",       "u_of_xi",
                                                "p_of_xi",   "u_is_gram",      "p_self_adjoint",   "p_isometry_defect"};
    return names;
}

void ResidualTally::add(double value) {
    const double v = std::abs(value);
    if (std::isnan(v)) {
        nan_ = true;
    } else {
        max_ = std::max(max_, v);
        sum_ += v;
    }
    ++count_;
}

void ResidualTally::merge(const ResidualTally& other) {
    max_ = std::max(max_, other.max_);
    sum_ += other.sum_;
    count_ += other.count_;
    nan_ = nan_ || other.nan_;
}

ResidualStat ResidualTally::finish(double tol, bool asserted) const {
    ResidualStat s;
    s.max_abs_err = nan_ ? std::numeric_limits<double>::quiet_NaN() : max_;
    s.mean_abs_err = count_ == 0 ? 0.0 : (nan_ ? std::numeric_limits<double>::quiet_NaN() : sum_ / count_);
    s.samples = count_;
    s.tol = tol;
    s.pass = s.max_abs_err < tol || (std::isinf(tol) && tol > 0);
    s.asserted = asserted;
    return s;
}

ResidualTally& TallySet::slot(const std::string& name) {
    for (auto& [n, t] : entries_) {
        if (n == name) return t;
    }
    entries_.emplace_back(name, ResidualTally{});
    return entries_.back().second;
}

void TallySet::add(const std::string& name, double value) { slot(name).add(value); }

void TallySet::add(const std::vector<NamedResidual>& values, const std::string& prefix) {
    for (const auto& v : values) {
        slot(prefix + v.name).add(v.value);
    }
}

void TallySet::merge(const TallySet& other) {
    for (const auto& [n, t] : other.entries_) {
        slot(n).merge(t);
    }
}

double ToleranceMap::lookup(const std::string& name, double category_default) const {
    auto it = overrides.find(name);
    return it == overrides.end() ? category_default : it->second;
}

ToleranceMap ToleranceMap::infinite() {
    ToleranceMap t;
    t.algebraic = t.composed = t.agreement = t.normality = kInfTol;
    t.weingarten_scalar = t.weingarten_commute = t.weingarten_self_adjoint = t.normal_connection = kInfTol;
    return t;
}

const ResidualStat* ResidualReport::find(const std::string& name) const {
    for (const auto& [n, s] : entries) {
        if (n == name) return &s;
    }
    return nullptr;
}

bool ResidualReport::pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return !e.second.asserted || e.second.pass; });
}

void ResidualReport::append(const std::string& name, const ResidualTally& tally, const ToleranceMap& tols,
                            double category_tol, bool asserted) {
    entries.emplace_back(name, tally.finish(tols.lookup(name, category_tol), asserted));
}

void ResidualReport::append(const TallySet& tallies, const ToleranceMap& tols, double category_tol, bool asserted) {
    for (const auto& [name, tally] : tallies.entries()) {
        append(name, tally, tols, category_tol, asserted);
    }
}

std::vector<NamedResidual> check_structure_identities(const InducedStructure& s, const AmbientVector& X,
                                                      const AmbientVector& Y, double eps) {
    const int c = s.codimension();
    const Shape shape = s.pt.shape();
    const Eigen::MatrixXd& a = s.a;

    const AmbientVector PX = p_apply(s, X);
    const AmbientVector PY = p_apply(s, Y);
    const Eigen::VectorXd uX = u_form(s, X);
    const Eigen::VectorXd uY = u_form(s, Y);

    // (i)
    const AmbientVector lhs_i = p_apply(s, PX);
    const AmbientVector rhs_i = eps * (X - combine(s.xi, uX, shape));
    const double r_i = (lhs_i - rhs_i).max_abs();

    // (ii): u(PX) = -a^T u(X)
    const Eigen::VectorXd r_ii_vec = u_form(s, PX) + a.transpose() * uX;
    const double r_ii = max_abs(r_ii_vec);

    // (iii)
    const double r_iii = max_abs(a - eps * a.transpose());

    // (iv)
    Eigen::MatrixXd u_xi(c, c);
    for (int be = 0; be < c; ++be) {
        u_xi.col(be) = u_form(s, s.xi[static_cast<std::size_t>(be)]);
    }
    const double r_iv = max_abs(u_xi - (Eigen::MatrixXd::Identity(c, c) - eps * a * a));

    // (v)
    double r_v = 0;
    for (int al = 0; al < c; ++al) {
        const AmbientVector lhs = p_apply(s, s.xi[static_cast<std::size_t>(al)]);
        const AmbientVector rhs = -combine(s.xi, a.row(al).transpose(), shape);
        r_v = std::max(r_v, (lhs - rhs).max_abs());
    }

    // (vi)
    const double r_vi = std::max(max_abs(uX - u_form_gram(s, X)), max_abs(uY - u_form_gram(s, Y)));

    // (vii)
    const double r_vii = std::abs(inner(PX, Y) - eps * inner(X, PY));

    // (viii)
    const double r_viii = std::abs(inner(PX, PY) - (inner(X, Y) - uX.dot(uY)));

    const auto& n = structure_identity_names();
    return {{n[0], r_i}, {n[1], r_ii}, {n[2], r_iii}, {n[3], r_iv},
            {n[4], r_v}, {n[5], r_vi}, {n[6], r_vii}, {n[7], r_viii}};
}

double check_cubic_identity(const InducedStructure& s, const AmbientVector& X, double eps) {
    const AmbientVector PX = p_apply(s, X);
    const AmbientVector P3X = p_apply(s, p_apply(s, PX));
    const Eigen::VectorXd g = u_form_gram(s, X);
    const Eigen::VectorXd w = s.a * g;  // w_a = sum_b a_ab <X, xi_b>
    AmbientVector rhs = eps * PX;
    for (int al = 0; al < s.codimension(); ++al) {
        rhs += w[al] * s.xi[static_cast<std::size_t>(al)];
    }
    return (P3X - rhs).max_abs();
}

std::vector<NamedResidual> compare_structures(const InducedStructure& lhs, const InducedStructure& rhs,
                                              const AmbientVector& X) {
    double xi_dev = 0;
    for (std::size_t al = 0; al < lhs.xi.size(); ++al) {
        xi_dev = std::max(xi_dev, (lhs.xi[al] - rhs.xi[al]).max_abs());
    }
    return {{"a", max_abs(lhs.a - rhs.a)},
            {"xi", xi_dev},
            {"u", max_abs(u_form(lhs, X) - u_form(rhs, X))},
            {"p", (p_apply(lhs, X) - p_apply(rhs, X)).max_abs()}};
}

Rng point_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

ResidualReport run_suite(const SubmanifoldSpec& spec, const SignPattern& signs, const SuiteOptions& opts) {
    if (opts.n_points < 1 || opts.n_vectors < 1) {
        throw ConfigError("n_points and n_vectors must be at least 1");
    }
    if (signs.size() != spec.shape().q) {
        throw ConfigError("sign pattern length must equal q");
    }
    const bool with_closed = signs.is_uniform();

    struct PointTallies {
        TallySet algebraic;
        TallySet composed;
        TallySet agreement;
    };
    std::vector<PointTallies> per_point(static_cast<std::size_t>(opts.n_points));

    parallel_for(per_point.size(), opts.threads, [&](std::size_t i) {
        Rng rng = point_stream(opts.seed, i);
        const AmbientVector pt = sample_point(spec, rng);
        const InducedStructure oracle = oracle_structure(spec, pt, signs);
        std::optional<InducedStructure> closed;
        if (with_closed) closed = closed_form_structure(spec, pt, signs);

        PointTallies& t = per_point[i];
        for (int v = 0; v < opts.n_vectors; ++v) {
            const AmbientVector X = sample_tangent(spec, pt, rng);
            const AmbientVector Y = sample_tangent(spec, pt, rng);
            t.algebraic.add(check_structure_identities(oracle, X, Y), "oracle.");
            t.composed.add("oracle.p_cubed", check_cubic_identity(oracle, X));
            if (closed) {
                t.algebraic.add(check_structure_identities(*closed, X, Y), "closed_form.");
                t.composed.add("closed_form.p_cubed", check_cubic_identity(*closed, X));
                t.agreement.add(compare_structures(*closed, oracle, X), "agreement.");
            }
        }
    });

    PointTallies total;
    for (const auto& t : per_point) {
        total.algebraic.merge(t.algebraic);
        total.composed.merge(t.composed);
        total.agreement.merge(t.agreement);
    }

    ResidualReport report;
    report.metadata = ReportMetadata{spec, signs, opts.seed, opts.n_points, opts.n_vectors};
    report.append(total.algebraic, opts.tols, opts.tols.algebraic, true);
    report.append(total.composed, opts.tols, opts.tols.composed, true);
    report.append(total.agreement, opts.tols, opts.tols.agreement, true);
    return report;
}

}  // namespace apstruct
