// Distribution evolution along the transform, code construction from the
// resulting Z/K/H profiles, the periodic fast path and two oracles (exact BEC
// recursion, brute-force enumeration).
#pragma once

#include "sppolar/channel_model.hpp"
#include "sppolar/dist_algebra.hpp"
#include "sppolar/transform.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace sppolar {

inline constexpr std::size_t kDefaultMu = 128;

/// Shared immutable handle; equal handles let evolve skip repeated work.
using DistHandle = std::shared_ptr<const TaggedDist>;

DistHandle make_handle(JointDist dist);

struct DistVector {
    std::vector<DistHandle> entries;
};

/// W at kept positions, S at shortened ones, P at punctured ones.
DistVector build_dist_vector(std::size_t m, const JointDist& w, RateMatching mode);

struct EvolveOptions {
    std::size_t mu = kDefaultMu;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

/// Runs the butterfly over distributions: leaf i is the synthesized
/// distribution of U_i given U^{i-1} and the outputs. Every distinct operand
/// pair of a stage is combined once.
std::vector<DistHandle> evolve(const DistVector& v, const EvolveOptions& options = {});

/// Seminal recursion: evolve applied to 2^depth copies of `omega`.
std::vector<DistHandle> evolve_identical(const DistHandle& omega, unsigned depth, const EvolveOptions& options = {});

/// Z/K/H of the kept window of leaves (prefix for shortening, suffix for
/// puncturing), computed once per distinct leaf.
std::vector<Metrics> leaf_profile(const std::vector<DistHandle>& leaves, const Pattern& pattern);

std::vector<Metrics> evolve_profile(std::size_t m, const JointDist& w, RateMatching mode,
                                    const EvolveOptions& options = {});

/// Profile for M = a * 2^(n-t) with 2^(t-1) < a <= 2^t. The first t stages
/// act on a single period of length 2^t; each resulting distribution then
/// feeds an identical-input recursion of depth n - t.
std::vector<Metrics> periodic_fast_path(std::size_t m, unsigned t, const JointDist& w, RateMatching mode,
                                        const EvolveOptions& options = {});

/// The 2^t distributions after the first t stages of the fast path.
std::vector<DistHandle> periodic_omegas(std::size_t m, unsigned t, const JointDist& w, RateMatching mode,
                                        const EvolveOptions& options = {});

/// All levels of the identical-input recursion: level k holds 2^k
/// distributions, entry i being the operation sequence spelled by the k bits
/// of i, most significant first ('-' for 0, '+' for 1).
std::vector<std::vector<DistHandle>> identical_levels(const DistHandle& omega, unsigned depth,
                                                      const EvolveOptions& options = {});

/// Every M factors uniquely as a * 2^(n-t) with 2^(t-1) < a <= 2^t (a odd or 1).
struct PeriodicForm {
    std::size_t a = 1;
    unsigned t = 0;
    unsigned n = 0;
};
PeriodicForm periodic_form(std::size_t m);

/// Profiles for several lengths at once. Lengths sharing the factor a share
/// their first t stages and one identical-input recursion per distribution,
/// so a sweep over n costs about as much as its longest member. Results
/// equal evolve_profile exactly.
std::vector<std::vector<Metrics>> periodic_profiles(const std::vector<std::size_t>& lengths, const JointDist& w,
                                                    RateMatching mode, const EvolveOptions& options = {});

/// Exact Z profile over the erasure family: S has Z = 0, P has Z = 1.
std::vector<double> bec_closed_form(std::size_t m, double eps, RateMatching mode);

inline constexpr std::size_t kBruteForceMaxLength = 8;
inline constexpr std::size_t kBruteForceMaxCells = std::size_t{1} << 26;

/// Builds the joint distribution of (U_i; U^{i-1}, Y^M) by enumeration.
/// Throws std::invalid_argument when M > 8 or 2^M |Y|^M exceeds 2^26.
std::vector<Metrics> brute_force_profile(std::size_t m, const JointDist& w, RateMatching mode);

/// Joint distribution of the input alone, over the single output '?'.
JointDist uninformative_joint(double p0);

struct CodeSpec {
    Pattern pattern;
    std::string channel;  // descriptor accepted by parse_channel
    double p0 = 0.5;
    std::size_t mu = kDefaultMu;
    std::vector<Metrics> profile;      // size M
    std::vector<std::size_t> frozen;   // sorted, subset of [0, M)

    std::size_t length() const { return pattern.length; }
    std::size_t info_size() const { return pattern.length - frozen.size(); }
    bool is_frozen(std::size_t i) const;
    /// Complement of frozen, ascending.
    std::vector<std::size_t> info_set() const;
};

/// The M - count indices with the largest Z, ties going to the lower index.
std::vector<std::size_t> select_frozen(const std::vector<Metrics>& profile, std::size_t count);

/// Throws std::invalid_argument when count > M.
CodeSpec construct_code(std::size_t m, const std::string& channel, double p0, RateMatching mode, std::size_t mu,
                        std::size_t count, unsigned workers = 0);

/// Text form: header lines "key value", then one "index Z K H frozen" line
/// per index. Numbers carry 12 significant digits.
void write_code_spec(std::ostream& out, const CodeSpec& spec);
CodeSpec read_code_spec(std::istream& in);
std::string format_number(double v);

}  // namespace sppolar
