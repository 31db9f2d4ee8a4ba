#include "locorth/upb.hpp"

#include "locorth/errors.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace locorth {

namespace {

using cd = std::complex<double>;

bool is_unitary(const Eigen::MatrixXcd& u) {
    auto id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return (u.adjoint() * u - id).cwiseAbs().maxCoeff() < 1e-12;
}

} // namespace

bool has_property_p(const BasisFamily& bf) {
    for (int j = 0; j < bf.m; ++j) {
        for (int k = j + 1; k < bf.m; ++k) {
            auto cross = (bf.bases[j].adjoint() * bf.bases[k]).cwiseAbs();
            if (cross.minCoeff() <= upb_tolerance) return false;
        }
    }
    return true;
}

BasisFamily make_basis_family(std::vector<Eigen::MatrixXcd> bases) {
    if (bases.empty()) throw InputError("basis family needs at least one basis");
    BasisFamily bf;
    bf.d = static_cast<int>(bases.front().rows());
    bf.m = static_cast<int>(bases.size());
    for (const auto& b : bases) {
        if (b.rows() != bf.d || b.cols() != bf.d) throw InputError("bases must all be d x d");
        if (!is_unitary(b)) throw InputError("basis matrix is not unitary");
    }
    bf.bases = std::move(bases);
    if (!has_property_p(bf)) throw InputError("basis family violates property (P)");
    return bf;
}

BasisFamily default_basis_family(int d, int m) {
    if (d < 2 || m < 1) throw InputError("basis family needs d >= 2 and m >= 1");
    std::vector<Eigen::MatrixXcd> bases;
    for (int j = 0; j < m; ++j) {
        Eigen::MatrixXcd u(d, d);
        if (d == 2) {
            const double t = j;
            u << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        } else if (j == 0) {
            u = Eigen::MatrixXcd::Identity(d, d);
        } else {
            const double norm = 1.0 / std::sqrt(static_cast<double>(d));
            for (int r = 0; r < d; ++r) {
                const double phase = 0.7 * j * r * r + 0.3 * j;
                for (int c = 0; c < d; ++c) {
                    u(r, c) = std::polar(norm, 2 * std::numbers::pi * r * c / d + phase);
                }
            }
        }
        bases.push_back(std::move(u));
    }
    return make_basis_family(std::move(bases));
}

Eigen::VectorXcd local_vector(const BasisFamily& bf, int basis, int element) {
    if (basis < 0 || basis >= bf.m || element < 0 || element >= bf.d) throw InputError("basis element out of range");
    return bf.bases[basis].col(element);
}

ProductVectorSet vectors_from_inequality(const LOInequality& i, const BasisFamily& bf) {
    const auto& s = i.scenario();
    if (bf.m != s.settings() || bf.d != s.outcomes()) {
        throw InputError("basis family does not match scenario " + s.to_string());
    }
    if (!has_property_p(bf)) throw InputError("basis family violates property (P)");
    ProductVectorSet out{bf, s.parties(), {}};
    for (const auto& e : i.event_list()) {
        std::vector<std::pair<int, int>> member;
        for (int p = 0; p < s.parties(); ++p) member.emplace_back(e.settings[p], e.outcomes[p]);
        out.members.push_back(std::move(member));
    }
    return out;
}

ProductVectorSet vectors_from_inequality(const LOInequality& i) {
    return vectors_from_inequality(i, default_basis_family(i.scenario().outcomes(), i.scenario().settings()));
}

std::complex<double> inner_product(const ProductVectorSet& s, std::size_t a, std::size_t b) {
    cd value = 1;
    for (int site = 0; site < s.sites; ++site) {
        auto [ba, ea] = s.members[a][site];
        auto [bb, eb] = s.members[b][site];
        value *= local_vector(s.family, ba, ea).dot(local_vector(s.family, bb, eb));
    }
    return value;
}

bool combinatorially_orthogonal(const ProductVectorSet& s, std::size_t a, std::size_t b) {
    for (int site = 0; site < s.sites; ++site) {
        if (s.members[a][site].first == s.members[b][site].first &&
            s.members[a][site].second != s.members[b][site].second) {
            return true;
        }
    }
    return false;
}

GramVerdict gram_orthogonality(const ProductVectorSet& s) {
    GramVerdict verdict;
    for (std::size_t a = 0; a < s.members.size(); ++a) {
        for (std::size_t b = a + 1; b < s.members.size(); ++b) {
            auto v = inner_product(s, a, b);
            bool numeric = std::abs(v) <= upb_tolerance;
            if (numeric != combinatorially_orthogonal(s, a, b)) {
                throw InternalError("numeric and combinatorial orthogonality disagree for members " +
                                    std::to_string(a) + " and " + std::to_string(b));
            }
            if (!numeric && verdict.orthogonal) verdict = GramVerdict{false, a, b, v};
        }
    }
    return verdict;
}

bool weak_unextendible(const ProductVectorSet& s, std::uint64_t max_candidates) {
    const auto& bf = s.family;
    const int local = bf.m * bf.d;
    long double total = std::pow(static_cast<long double>(local), s.sites);
    if (total > static_cast<long double>(max_candidates)) {
        throw BudgetExceeded("weak unextendibility needs " + std::to_string(static_cast<double>(total)) + " candidates");
    }
    // overlap[l][l'] = |<local l | local l'>|
    std::vector<std::vector<double>> overlap(local, std::vector<double>(local));
    for (int l = 0; l < local; ++l) {
        for (int k = 0; k < local; ++k) {
            overlap[l][k] = std::abs(local_vector(bf, l / bf.d, l % bf.d).dot(local_vector(bf, k / bf.d, k % bf.d)));
        }
    }
    std::vector<int> labels(s.sites, 0);
    const auto count = static_cast<std::uint64_t>(total);
    bool unextendible = true;
    for (std::uint64_t c = 0; c < count; ++c) {
        auto rest = c;
        for (int site = s.sites - 1; site >= 0; --site) {
            labels[site] = static_cast<int>(rest % local);
            rest /= local;
        }
        bool numeric_all = true, combinatorial_all = true;
        for (const auto& member : s.members) {
            double mag = 1;
            bool comb = false;
            for (int site = 0; site < s.sites; ++site) {
                int l = member[site].first * bf.d + member[site].second;
                mag *= overlap[labels[site]][l];
                if (labels[site] / bf.d == member[site].first && labels[site] % bf.d != member[site].second) comb = true;
            }
            numeric_all = numeric_all && mag <= upb_tolerance;
            combinatorial_all = combinatorial_all && comb;
        }
        if (numeric_all != combinatorial_all) throw InternalError("numeric and combinatorial extension checks disagree");
        if (numeric_all) unextendible = false;
    }
    return unextendible;
}

namespace {

Eigen::VectorXcd random_unit(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(d);
    for (int k = 0; k < d; ++k) v(k) = cd(g(rng), g(rng));
    return v / v.norm();
}

} // namespace

std::complex<double> inner_product(const ProductVectorSet& s, const ProductVector& v, std::size_t j) {
    cd value = 1;
    for (int site = 0; site < s.sites; ++site) {
        auto [b, e] = s.members[j][site];
        value *= v.sites[site].dot(local_vector(s.family, b, e));
    }
    return value;
}

bool qubit_upb_check(const ProductVectorSet& s, std::uint64_t samples, std::uint64_t seed) {
    if (s.family.d != 2) throw InputError("qubit UPB check needs d = 2");
    if (!weak_unextendible(s)) throw InputError("set is not a weak UPB");
    std::mt19937_64 rng(seed);
    ProductVector v;
    v.sites.resize(s.sites);
    for (std::uint64_t t = 0; t < samples; ++t) {
        for (auto& site : v.sites) site = random_unit(2, rng);
        bool orthogonal_to_all = true;
        for (std::size_t j = 0; j < s.members.size() && orthogonal_to_all; ++j) {
            orthogonal_to_all = std::abs(inner_product(s, v, j)) <= upb_tolerance;
        }
        if (orthogonal_to_all) return false;
    }
    return true;
}

std::vector<ProductVector> find_orthogonal_product_vectors(const ProductVectorSet& s, std::size_t limit) {
    const auto& bf = s.family;
    const int local = bf.m * bf.d;
    const auto members = s.members.size();
    if (members > 64) throw InputError("orthogonal product vector search supports at most 64 members");

    // Candidate local vectors: a generic vector of the orthocomplement of each subset of <= d-1 basis elements.
    struct Candidate {
        Eigen::VectorXcd vector;
        std::string description;
    };
    std::vector<Candidate> candidates;
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t mask = 0; mask < (1U << local); ++mask) {
        if (std::popcount(mask) <= bf.d - 1) subsets.push_back(mask);
    }
    // Most constrained first, then by member labels.
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) > std::popcount(b); });
    for (auto mask : subsets) {
        Eigen::MatrixXcd rows(std::popcount(mask), bf.d);
        std::string desc = "perp{";
        int r = 0;
        for (int l = 0; l < local; ++l) {
            if (!(mask >> l & 1U)) continue;
            rows.row(r++) = local_vector(bf, l / bf.d, l % bf.d).adjoint();
            desc += (r > 1 ? "," : "") + basis_symbol(bf, l / bf.d, l % bf.d);
        }
        desc += "}";
        Eigen::MatrixXcd kernel;
        if (r == 0) {
            kernel = Eigen::MatrixXcd::Identity(bf.d, bf.d);
        } else {
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(rows);
            lu.setThreshold(1e-12);
            kernel = lu.kernel();
            if (kernel.cols() == 0 || kernel.norm() < 1e-12) continue;
            // Orthonormalize so the generic combination is well conditioned.
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(kernel);
            kernel = qr.householderQ() * Eigen::MatrixXcd::Identity(bf.d, kernel.cols());
        }
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(bf.d);
        for (int c = 0; c < kernel.cols(); ++c) v += cd(std::cos(0.37 + 1.3 * c), std::sin(0.91 * c + 0.2)) * kernel.col(c);
        v /= v.norm();
        candidates.push_back({v, desc});
    }

    // masks[site][c]: members whose site component the candidate is orthogonal to.
    std::vector<std::vector<std::uint64_t>> masks(s.sites, std::vector<std::uint64_t>(candidates.size(), 0));
    for (int site = 0; site < s.sites; ++site) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            for (std::size_t j = 0; j < members; ++j) {
                auto [b, e] = s.members[j][site];
                if (std::abs(candidates[c].vector.dot(local_vector(bf, b, e))) <= upb_tolerance) masks[site][c] |= 1ULL << j;
            }
        }
    }
    const std::uint64_t full = members == 64 ? ~0ULL : (1ULL << members) - 1;
    std::vector<std::size_t> pick(s.sites);
    std::vector<ProductVector> found;
    std::function<void(int, std::uint64_t)> search = [&](int site, std::uint64_t covered) {
        if (found.size() >= limit) return;
        if (site == s.sites) {
            if (covered != full) return;
            ProductVector v;
            for (int k = 0; k < s.sites; ++k) {
                v.sites.push_back(candidates[pick[k]].vector);
                v.description.push_back(candidates[pick[k]].description);
            }
            for (std::size_t j = 0; j < members; ++j) {
                if (std::abs(inner_product(s, v, j)) > upb_tolerance) {
                    throw InternalError("orthogonal product vector failed certification");
                }
            }
            found.push_back(std::move(v));
            return;
        }
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            pick[site] = c;
            search(site + 1, covered | masks[site][c]);
        }
    };
    search(0, 0);
    return found;
}

std::optional<ProductVector> find_orthogonal_product_vector(const ProductVectorSet& s) {
    auto found = find_orthogonal_product_vectors(s, 1);
    if (found.empty()) return std::nullopt;
    return std::move(found.front());
}

std::string basis_symbol(const BasisFamily& bf, int basis, int element) {
    if (basis == 0 && bf.d <= 10) return std::to_string(element);
    if (basis == 1 && bf.d <= 3) {
        static const char* names[] = {"e", "e⊥", "e⊤"};
        return names[element];
    }
    return "b" + std::to_string(basis) + "." + std::to_string(element);
}

std::string format_member(const ProductVectorSet& s, std::size_t j) {
    std::string out = "|";
    for (const auto& [b, e] : s.members[j]) out += basis_symbol(s.family, b, e);
    return out + ">";
}

std::string export_upb(const ProductVectorSet& s) {
    std::ostringstream out;
    out << std::setprecision(12);
    for (std::size_t j = 0; j < s.members.size(); ++j) {
        out << format_member(s, j);
        for (const auto& [b, e] : s.members[j]) {
            out << " [";
            auto v = local_vector(s.family, b, e);
            for (int k = 0; k < v.size(); ++k) out << (k ? " " : "") << v(k).real() << (v(k).imag() < 0 ? "" : "+") << v(k).imag() << "i";
            out << "]";
        }
        out << '\n';
    }
    return out.str();
}

} // namespace locorth
