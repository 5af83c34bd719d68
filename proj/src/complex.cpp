#include "hdx/complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "hdx/errors.hpp"

namespace hdx {

// ---------------------------------------------------------------------------
// Face
// ---------------------------------------------------------------------------

Face::Face(std::vector<Element> elements) : elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
        throw InvalidParameterError("face " + to_string() + " repeats an element");
}

bool Face::contains(Element e) const noexcept {
    return std::binary_search(elements_.begin(), elements_.end(), e);
}

bool Face::is_subset_of(const Face& other) const noexcept {
    return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(),
                         elements_.end());
}

Face Face::without(Element e) const {
    Face out;
    out.elements_.reserve(elements_.size());
    for (Element x : elements_)
        if (x != e) out.elements_.push_back(x);
    return out;
}

Face Face::with(Element e) const {
    Face out = *this;
    auto it = std::lower_bound(out.elements_.begin(), out.elements_.end(), e);
    if (it == out.elements_.end() || *it != e) out.elements_.insert(it, e);
    return out;
}

Face Face::set_union(const Face& other) const {
    Face out;
    std::set_union(elements_.begin(), elements_.end(), other.elements_.begin(),
                   other.elements_.end(), std::back_inserter(out.elements_));
    return out;
}

Face Face::set_difference(const Face& other) const {
    Face out;
    std::set_difference(elements_.begin(), elements_.end(), other.elements_.begin(),
                        other.elements_.end(), std::back_inserter(out.elements_));
    return out;
}

std::string Face::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i) os << ',';
        os << elements_[i];
    }
    os << '}';
    return os.str();
}

std::size_t FaceHash::operator()(const Face& f) const noexcept {
    // FNV-1a over the element list.
    std::uint64_t h = 1469598103934665603ull;
    for (Element e : f.elements()) {
        h ^= e;
        h *= 1099511628211ull;
    }
    h ^= f.size();
    return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// PureSimplicialComplex accessors
// ---------------------------------------------------------------------------

const PureSimplicialComplex::Level& PureSimplicialComplex::level_at(std::size_t k) const {
    if (k >= levels_.size())
        throw LevelOutOfRangeError("level " + std::to_string(k) + " outside 0.." +
                                   std::to_string(dimension()));
    return levels_[k];
}

std::size_t PureSimplicialComplex::level_size(std::size_t k) const {
    return level_at(k).faces.size();
}

const std::vector<Face>& PureSimplicialComplex::faces(std::size_t k) const {
    return level_at(k).faces;
}

const std::vector<double>& PureSimplicialComplex::weights(std::size_t k) const {
    return level_at(k).weights;
}

std::vector<std::size_t> PureSimplicialComplex::face_counts() const {
    std::vector<std::size_t> out;
    out.reserve(levels_.size());
    for (const auto& level : levels_) out.push_back(level.faces.size());
    return out;
}

std::optional<std::size_t> PureSimplicialComplex::find(const Face& face) const {
    if (face.size() >= levels_.size()) return std::nullopt;
    const auto& index = levels_[face.size()].index;
    auto it = index.find(face);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

std::size_t PureSimplicialComplex::index_of(const Face& face) const {
    auto idx = find(face);
    if (!idx) throw NotAFaceError(face.to_string() + " is not a face of the complex");
    return *idx;
}

double PureSimplicialComplex::weight(const Face& face) const {
    const std::size_t idx = index_of(face);
    return levels_[face.size()].weights[idx];
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

PureSimplicialComplex build_from_top_faces(std::size_t d, std::vector<WeightedFace> top_faces,
                                           std::optional<std::size_t> ground_set_size,
                                           const BuildOptions& options) {
    if (top_faces.empty()) throw EmptyComplexError("no top faces given");

    std::size_t max_element_plus_one = 0;
    for (const auto& [face, weight] : top_faces) {
        if (face.size() != d)
            throw PurityError("face " + face.to_string() + " has cardinality " +
                              std::to_string(face.size()) + ", expected " + std::to_string(d));
        if (!std::isfinite(weight) || weight <= 0.0)
            throw InvalidParameterError("face " + face.to_string() +
                                        " has non-finite or nonpositive weight");
        if (!face.empty())
            max_element_plus_one =
                std::max<std::size_t>(max_element_plus_one, face.elements().back() + 1);
    }
    const std::size_t n = ground_set_size.value_or(max_element_plus_one);
    if (max_element_plus_one > n)
        throw InvalidParameterError("element " + std::to_string(max_element_plus_one - 1) +
                                    " outside ground set of size " + std::to_string(n));
    if (top_faces.size() > options.max_faces_per_level)
        throw GuardrailError("top level has " + std::to_string(top_faces.size()) +
                             " faces, limit is " + std::to_string(options.max_faces_per_level));

    PureSimplicialComplex complex;
    complex.ground_set_size_ = n;
    complex.levels_.resize(d + 1);

    auto finalize_level = [&](PureSimplicialComplex::Level& level,
                              std::unordered_map<Face, double, FaceHash>&& accumulated) {
        std::vector<std::pair<Face, double>> entries(std::make_move_iterator(accumulated.begin()),
                                                     std::make_move_iterator(accumulated.end()));
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        level.faces.reserve(entries.size());
        level.weights.reserve(entries.size());
        for (auto& [face, w] : entries) {
            level.index.emplace(face, level.faces.size());
            level.faces.push_back(std::move(face));
            level.weights.push_back(w);
        }
    };

    {
        std::unordered_map<Face, double, FaceHash> top;
        top.reserve(top_faces.size());
        for (auto& [face, weight] : top_faces) {
            auto [it, inserted] = top.emplace(face, weight);
            if (!inserted) throw DuplicateFaceError("face " + face.to_string() + " listed twice");
        }
        finalize_level(complex.levels_[d], std::move(top));
    }

    for (std::size_t k = d; k-- > 0;) {
        const auto& upper = complex.levels_[k + 1];
        std::unordered_map<Face, double, FaceHash> lower;
        for (std::size_t t = 0; t < upper.faces.size(); ++t) {
            const Face& face = upper.faces[t];
            for (Element e : face.elements()) lower[face.without(e)] += upper.weights[t];
        }
        if (lower.size() > options.max_faces_per_level)
            throw GuardrailError("level " + std::to_string(k) + " has " +
                                 std::to_string(lower.size()) + " faces, limit is " +
                                 std::to_string(options.max_faces_per_level));
        finalize_level(complex.levels_[k], std::move(lower));
    }
    return complex;
}

LevelDistribution level_distribution(const PureSimplicialComplex& complex, std::size_t k) {
    if (k > complex.dimension())
        throw LevelOutOfRangeError("level " + std::to_string(k) + " exceeds dimension " +
                                   std::to_string(complex.dimension()));
    const auto& w = complex.weights(k);
    LevelDistribution dist;
    dist.level = k;
    dist.probabilities = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    dist.probabilities /= dist.probabilities.sum();
    return dist;
}

Link link(const PureSimplicialComplex& complex, const Face& base) {
    if (!complex.contains(base))
        throw NotAFaceError(base.to_string() + " is not a face of the complex");
    const std::size_t d = complex.dimension();
    std::vector<WeightedFace> top;
    const auto& faces = complex.faces(d);
    const auto& weights = complex.weights(d);
    for (std::size_t t = 0; t < faces.size(); ++t)
        if (base.is_subset_of(faces[t])) top.push_back({faces[t].set_difference(base), weights[t]});
    BuildOptions unlimited;
    unlimited.max_faces_per_level = static_cast<std::size_t>(-1);
    return Link{base, build_from_top_faces(d - base.size(), std::move(top),
                                           complex.ground_set_size(), unlimited)};
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

// Calls visit(subset) for each k-subset of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
    if (k > n) return;
    std::vector<Element> idx(k);
    std::iota(idx.begin(), idx.end(), Element{0});
    while (true) {
        visit(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t root(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = root(a);
        b = root(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

PureSimplicialComplex generate_complete_complex(std::size_t n, std::size_t d,
                                                const BuildOptions& options) {
    if (d < 1 || d > n)
        throw InvalidParameterError("complete complex needs 1 <= d <= n, got n=" +
                                    std::to_string(n) + " d=" + std::to_string(d));
    std::vector<WeightedFace> top;
    for_each_subset(n, d, [&](const std::vector<Element>& s) {
        if (top.size() > options.max_faces_per_level)
            throw GuardrailError("complete complex exceeds the face limit");
        top.push_back({Face(s), 1.0});
    });
    return build_from_top_faces(d, std::move(top), n, options);
}

PureSimplicialComplex generate_graphic_matroid_bases(
    const std::vector<std::pair<std::size_t, std::size_t>>& edges, const BuildOptions& options) {
    // Relabel the vertices that actually appear to 0..V-1.
    std::vector<std::size_t> vertices;
    for (auto [u, v] : edges) {
        vertices.push_back(u);
        vertices.push_back(v);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    if (vertices.size() < 2)
        throw InvalidParameterError("graphic matroid needs a graph on at least 2 vertices");
    auto label = [&](std::size_t v) {
        return static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), v) -
                                        vertices.begin());
    };

    const std::size_t num_vertices = vertices.size();
    DisjointSets components(num_vertices);
    for (auto [u, v] : edges) components.unite(label(u), label(v));
    for (std::size_t v = 1; v < num_vertices; ++v)
        if (components.root(v) != components.root(0))
            throw DisconnectedGraphError("edge list does not form a connected graph");

    const std::size_t rank = num_vertices - 1;
    std::vector<WeightedFace> top;
    for_each_subset(edges.size(), rank, [&](const std::vector<Element>& subset) {
        DisjointSets forest(num_vertices);
        for (Element e : subset)
            if (!forest.unite(label(edges[e].first), label(edges[e].second))) return;
        if (top.size() >= options.max_faces_per_level)
            throw GuardrailError("graphic matroid has too many bases");
        top.push_back({Face(subset), 1.0});
    });
    return build_from_top_faces(rank, std::move(top), edges.size(), options);
}

PureSimplicialComplex generate_random_complex(std::size_t n, std::size_t d, double density,
                                              std::uint64_t seed, const BuildOptions& options) {
    if (d < 1 || d > n)
        throw InvalidParameterError("random complex needs 1 <= d <= n");
    if (!(density > 0.0 && density <= 1.0))
        throw InvalidParameterError("density must lie in (0, 1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.2, 2.0);
    std::vector<WeightedFace> top;
    for_each_subset(n, d, [&](const std::vector<Element>& s) {
        const bool keep = coin(rng) < density;
        const double w = weight(rng);
        if (keep) top.push_back({Face(s), w});
    });
    if (top.empty()) {
        std::vector<Element> first(d);
        std::iota(first.begin(), first.end(), Element{0});
        top.push_back({Face(first), weight(rng)});
    }
    return build_from_top_faces(d, std::move(top), n, options);
}

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

double weight_recursion_residual(const PureSimplicialComplex& complex) {
    double worst = 0.0;
    const std::size_t d = complex.dimension();
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> cover_sum(complex.level_size(k), 0.0);
        const auto& upper = complex.faces(k + 1);
        const auto& upper_w = complex.weights(k + 1);
        for (std::size_t t = 0; t < upper.size(); ++t)
            for (Element e : upper[t].elements())
                cover_sum[complex.index_of(upper[t].without(e))] += upper_w[t];
        const auto& w = complex.weights(k);
        for (std::size_t s = 0; s < w.size(); ++s)
            worst = std::max(worst, std::abs(w[s] - cover_sum[s]) / w[s]);
    }
    return worst;
}

double mixture_identity_residual(const PureSimplicialComplex& complex, std::size_t k) {
    if (k < 2 || k > complex.dimension())
        throw LevelOutOfRangeError("mixture identity needs 2 <= k <= d");
    const auto pi_k = level_distribution(complex, k);
    const auto pi_base = level_distribution(complex, k - 2);
    const auto& faces_k = complex.faces(k);
    const auto& w_k = complex.weights(k);

    // Normalizer of π_{S,2}: Σ over level-k supersets I of S of w(I).
    std::vector<double> link_mass(complex.level_size(k - 2), 0.0);
    std::vector<std::vector<std::size_t>> bases_of(faces_k.size());
    for (std::size_t i = 0; i < faces_k.size(); ++i) {
        const auto elems = faces_k[i].elements();
        for (std::size_t a = 0; a < elems.size(); ++a)
            for (std::size_t b = a + 1; b < elems.size(); ++b) {
                const std::size_t s = complex.index_of(faces_k[i].without(elems[a]).without(elems[b]));
                bases_of[i].push_back(s);
                link_mass[s] += w_k[i];
            }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < faces_k.size(); ++i) {
        double mixture = 0.0;
        for (std::size_t s : bases_of[i]) mixture += pi_base.probabilities[s] * w_k[i] / link_mass[s];
        worst = std::max(worst, std::abs(mixture - pi_k.probabilities[i]));
    }
    return worst;
}

double link_consistency_residual(const PureSimplicialComplex& complex, const Face& base) {
    const Link lk = link(complex, base);
    double worst = 0.0;
    for (std::size_t k = 0; k <= lk.complex.dimension(); ++k) {
        const auto pi_link = level_distribution(lk.complex, k);
        const auto pi_parent = level_distribution(complex, base.size() + k);
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        const auto& faces = lk.complex.faces(k);
        for (std::size_t t = 0; t < faces.size(); ++t) {
            const double ratio =
                pi_parent.probabilities[complex.index_of(faces[t].set_union(base))] /
                pi_link.probabilities[t];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        worst = std::max(worst, hi / lo - 1.0);
    }
    return worst;
}

}  // namespace hdx
