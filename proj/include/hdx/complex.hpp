#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hdx {

using Element = std::uint32_t;

/// A face of a simplicial complex: a set of ground-set elements kept in
/// strictly increasing order. Comparison is lexicographic on that list.
class Face {
public:
    Face() = default;
    /// Sorts the input; throws InvalidParameterError on repeated elements.
    explicit Face(std::vector<Element> elements);
    Face(std::initializer_list<Element> elements) : Face(std::vector<Element>(elements)) {}

    std::span<const Element> elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }

    bool contains(Element e) const noexcept;
    bool is_subset_of(const Face& other) const noexcept;
    Face without(Element e) const;
    Face with(Element e) const;
    Face set_union(const Face& other) const;
    Face set_difference(const Face& other) const;

    std::string to_string() const;

    auto operator<=>(const Face&) const = default;
    bool operator==(const Face&) const = default;

private:
    std::vector<Element> elements_;
};

struct FaceHash {
    std::size_t operator()(const Face& f) const noexcept;
};

struct WeightedFace {
    Face face;
    double weight = 1.0;
};

/// π_k over the faces of one level, indexed like the level itself.
struct LevelDistribution {
    std::size_t level = 0;
    Eigen::VectorXd probabilities;

    std::size_t size() const noexcept { return static_cast<std::size_t>(probabilities.size()); }
};

struct BuildOptions {
    // Refuse instances where any level would exceed this many faces.
    std::size_t max_faces_per_level = 100000;
};

struct Link;

/// Weighted pure simplicial complex. Faces at each level are stored in
/// lexicographic order; the index of a face within its level is the state
/// index used by every operator built on top of the complex.
///
/// Weights follow the recursion w(S) = Σ_{T ⊃ S, |T| = |S|+1} w(T) with the
/// top level given by the input. Immutable after construction.
class PureSimplicialComplex {
public:
    std::size_t dimension() const noexcept { return levels_.size() - 1; }
    std::size_t ground_set_size() const noexcept { return ground_set_size_; }

    std::size_t level_size(std::size_t k) const;
    const std::vector<Face>& faces(std::size_t k) const;
    const std::vector<double>& weights(std::size_t k) const;
    std::vector<std::size_t> face_counts() const;

    std::optional<std::size_t> find(const Face& face) const;
    /// Index of `face` within its level; throws NotAFaceError.
    std::size_t index_of(const Face& face) const;
    bool contains(const Face& face) const { return find(face).has_value(); }
    /// w(face); throws NotAFaceError.
    double weight(const Face& face) const;
    /// w(∅).
    double total_weight() const { return levels_.front().weights.front(); }

private:
    struct Level {
        std::vector<Face> faces;
        std::vector<double> weights;
        std::unordered_map<Face, std::size_t, FaceHash> index;
    };

    const Level& level_at(std::size_t k) const;

    std::size_t ground_set_size_ = 0;
    std::vector<Level> levels_;

    friend PureSimplicialComplex build_from_top_faces(std::size_t, std::vector<WeightedFace>,
                                                      std::optional<std::size_t>, const BuildOptions&);
};

/// The link C_S of a face S: faces T disjoint from S with T ∪ S a face.
/// Elements keep their labels from the parent ground set.
struct Link {
    Face base;
    PureSimplicialComplex complex;
};

/// Builds a complex of dimension d from its top faces, enumerating every
/// lower face as a subset of some top face.
///
/// Throws EmptyComplexError, PurityError, DuplicateFaceError,
/// InvalidParameterError (bad weight or element out of range) and
/// GuardrailError (a level exceeds options.max_faces_per_level).
PureSimplicialComplex build_from_top_faces(std::size_t d, std::vector<WeightedFace> top_faces,
                                           std::optional<std::size_t> ground_set_size = std::nullopt,
                                           const BuildOptions& options = {});

LevelDistribution level_distribution(const PureSimplicialComplex& complex, std::size_t k);

Link link(const PureSimplicialComplex& complex, const Face& base);

PureSimplicialComplex generate_complete_complex(std::size_t n, std::size_t d,
                                                const BuildOptions& options = {});

/// Bases of the graphic matroid of a connected multigraph: each spanning
/// tree is a top face whose elements are edge indices into `edges`.
PureSimplicialComplex generate_graphic_matroid_bases(
    const std::vector<std::pair<std::size_t, std::size_t>>& edges, const BuildOptions& options = {});

/// Random subset of the d-subsets of [n], each kept with probability
/// `density`, weights uniform in [0.2, 2]. At least one face is always kept.
PureSimplicialComplex generate_random_complex(std::size_t n, std::size_t d, double density,
                                              std::uint64_t seed, const BuildOptions& options = {});

// Structural checks. Each returns the worst residual over the instance.

/// max over |S| < d of |w(S) − Σ w(covers)| / w(S).
double weight_recursion_residual(const PureSimplicialComplex& complex);

/// max over I ∈ C(k) of |π_k(I) − Σ_{S ⊂ I, |S| = k−2} π_{k−2}(S) π_{S,2}(I∖S)|.
/// Requires 2 ≤ k ≤ d.
double mixture_identity_residual(const PureSimplicialComplex& complex, std::size_t k);

/// Worst spread (max/min − 1) of the ratio π_{|S|+k}(S ∪ T) / π_{S,k}(T)
/// over T, maximized over k, for the link at `base`.
double link_consistency_residual(const PureSimplicialComplex& complex, const Face& base);

}  // namespace hdx
