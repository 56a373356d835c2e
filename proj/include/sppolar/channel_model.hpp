// Binary-input memoryless channels, input distributions and joint
// distributions, together with the three polarization figures of merit.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sppolar {

inline constexpr double kMassTolerance = 1e-12;

/// Distribution of the binary channel input.
class InputDist {
public:
    explicit InputDist(double p0 = 0.5);

    static InputDist uniform() { return InputDist(0.5); }

    double p0() const { return p0_; }
    double p1() const { return 1.0 - p0_; }
    double operator()(int x) const { return x == 0 ? p0_ : 1.0 - p0_; }

private:
    double p0_;
};

/// W(y|x) over a finite output alphabet. Output symbols are the indices
/// 0..size()-1; `labels` only matters for text I/O.
class BMChannel {
public:
    BMChannel(std::vector<double> w0, std::vector<double> w1, std::vector<std::string> labels = {});

    std::size_t size() const { return w0_.size(); }
    double w(int x, std::size_t y) const { return x == 0 ? w0_[y] : w1_[y]; }
    std::span<const double> row(int x) const { return x == 0 ? w0_ : w1_; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Index of the output labelled `label`; throws std::invalid_argument if absent.
    std::size_t symbol(const std::string& label) const;

    /// True when some involution pi of the outputs satisfies W(y|0) = W(pi(y)|1).
    bool is_symmetric(double tol = kMassTolerance) const;

private:
    std::vector<double> w0_;
    std::vector<double> w1_;
    std::vector<std::string> labels_;
};

/// Joint probability table P(x;y), x in {0,1}. The central evolving object:
/// channels, the superb and pitiful distributions and every synthesized
/// bit-channel are all represented this way.
class JointDist {
public:
    JointDist() = default;
    /// Validates nonnegativity and unit total mass (1e-12).
    JointDist(std::vector<double> m0, std::vector<double> m1);

    /// Skips validation. For internal producers whose outputs are correct by
    /// construction (the combining operations, merges).
    static JointDist unchecked(std::vector<double> m0, std::vector<double> m1);

    std::size_t size() const { return m0_.size(); }
    double mass(int x, std::size_t y) const { return x == 0 ? m0_[y] : m1_[y]; }
    double output_mass(std::size_t y) const { return m0_[y] + m1_[y]; }
    std::span<const double> row(int x) const { return x == 0 ? m0_ : m1_; }
    double total_mass() const;

    /// Marginal of the input, P(X = 0).
    double input_p0() const;

    friend bool operator==(const JointDist&, const JointDist&) = default;

private:
    std::vector<double> m0_;
    std::vector<double> m1_;
};

/// Largest entrywise difference; infinity when the alphabets differ in size.
double max_abs_diff(const JointDist& a, const JointDist& b);

BMChannel make_bsc(double p);
BMChannel make_bec(double eps);
/// Single output '?' carrying no information about the input.
BMChannel make_uninformative();

JointDist joint_from(const InputDist& p, const BMChannel& w);

/// Z = 2 sum_y sqrt(P(0;y) P(1;y)).
double bhattacharyya(const JointDist& a);
/// K = sum_y |P(0;y) - P(1;y)|.
double total_variation(const JointDist& a);
/// H(X|Y) in bits.
double cond_entropy(const JointDist& a);

/// Binary entropy in bits, 0 log 0 = 0.
double binary_entropy(double p);

struct Metrics {
    double z = 0.0;
    double k = 0.0;
    double h = 0.0;
};

Metrics metrics(const JointDist& a);

}  // namespace sppolar

namespace sppolar {

/// Channel from a descriptor: "bsc:<p>", "bec:<eps>", "none" (uninformative)
/// or "bmc:<w0 row>/<w1 row>" with comma-separated rows, e.g.
/// "bmc:0.7,0.2,0.1/0.1,0.2,0.7".
BMChannel parse_channel(const std::string& descriptor);

}  // namespace sppolar
