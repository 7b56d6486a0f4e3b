#ifndef TASIM_CONFIG_HPP
#define TASIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tasim {

// Inclusive dB grid; never steps past stop_db.
struct SweepSpec {
    double start_db = 0.0;
    double stop_db = 0.0;
    double step_db = 1.0;

    std::vector<double> grid() const;
};

enum class SelectionPolicy { ssi, random_antenna };

struct SimOptions {
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
    double rho = 0.0; // shadowing power correlation
    double pe = 0.0;  // feedback bit error probability
    SelectionPolicy policy = SelectionPolicy::ssi;
    int partitions = 1;
};

struct ModulationSpec {
    std::string family; // bpsk | bfsk | pam | psk | qam
    int M = 2;
};

// Full scenario: link count, per-link Gamma shape parameters, mean shadow
// powers and the transmit SNR (point or sweep). Immutable once built.
class ChannelConfig {
public:
    ChannelConfig(int L, std::vector<int> m_alpha, std::vector<double> m_beta,
                  std::vector<double> omega, double snr_db,
                  std::optional<SweepSpec> sweep = std::nullopt);

    int num_links() const { return L_; }
    int m_alpha(int ell) const { return m_alpha_.at(check(ell)); }
    double m_beta(int ell) const { return m_beta_.at(check(ell)); }
    double omega(int ell) const { return omega_.at(check(ell)); }
    double snr_db() const { return snr_db_; }
    double snr_linear() const;
    const std::optional<SweepSpec>& sweep() const { return sweep_; }

    // Mean branch SNR in linear scale: omega_ell * Es/N0.
    double mean_branch_snr(int ell) const;

    // Same scenario evaluated at a different SNR point.
    ChannelConfig at_snr_db(double snr_db) const;

    const std::vector<int>& m_alpha_all() const { return m_alpha_; }
    const std::vector<double>& m_beta_all() const { return m_beta_; }
    const std::vector<double>& omega_all() const { return omega_; }

    std::optional<ModulationSpec> modulation;
    std::optional<SimOptions> sim;

    bool operator==(const ChannelConfig& o) const;

private:
    int check(int ell) const;
    int L_;
    std::vector<int> m_alpha_;
    std::vector<double> m_beta_;
    std::vector<double> omega_;
    double snr_db_;
    std::optional<SweepSpec> sweep_;
};

// Reference-SNR normalization for the high-SNR theory: gamma_bar = kappa_ell *
// gamma_tilde_ell must hold for every link.
struct AsymptoticConfig {
    std::vector<double> kappa;
    double gamma_bar = 1.0;

    // kappa_ell = 1/omega_ell, which keeps gamma_bar = Es/N0 at every sweep point.
    static AsymptoticConfig from_config(const ChannelConfig& cfg);
    void validate(const ChannelConfig& cfg) const;
};

// Strict JSON scenario parser; unknown keys are an error.
ChannelConfig parse_config(const std::string& text);
std::string serialize_config(const ChannelConfig& cfg);
ChannelConfig load_config_file(const std::string& path);

} // namespace tasim

#endif
