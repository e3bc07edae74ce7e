#ifndef REPMETA_SIMULATION_HPP
#define REPMETA_SIMULATION_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repmeta::sim {

/// Monte-Carlo design: N-1 null studies with true effects ~ Normal(0, tau2)
/// plus one study with true effect mu_n; observed effects carry within-study
/// noise of standard deviation within_sd.
struct SimConfig
{
    std::vector<int> n_values{3, 5, 7, 9, 20};
    std::vector<double> tau2_values{0.01, 0.04, 0.09, 0.25, 0.49, 1.0};
    std::vector<double> mu_n_grid = mu_grid(0.05, 5.0);
    double within_sd = 0.01;
    std::uint64_t iterations = 10'000;
    double alpha = 0.05;
    std::uint64_t seed = 42;
    unsigned threads = 0; ///< 0 = hardware concurrency

    /// {0, step, 2 step, ..., max}, each point rounded to 1e-9.
    static std::vector<double> mu_grid(double step, double max);

    static SimConfig full(std::uint64_t seed);
    /// N in {3, 9}, tau2 in {0.01, 0.25}, mu_n in {0, 0.1, 0.3, 1}.
    static SimConfig desk(std::uint64_t seed);

    /// Throws InputError on an empty or out-of-range field.
    void validate() const;
};

enum class TestKind { z_higgins, t_plain };

std::string_view to_string(TestKind test) noexcept;

struct Cell
{
    TestKind test = TestKind::t_plain;
    int n = 3;
    double tau2 = 0.0;
    double mu_n = 0.0;
    std::uint64_t rejections = 0;
    std::uint64_t iterations = 0;
    double fraction = 0.0;
    double mc_se = 0.0; ///< sqrt(fraction (1 - fraction) / iterations)
};

struct SimulationGrid
{
    SimConfig config;
    /// Ordered by test, N, tau2, mu_n.
    std::vector<Cell> cells;

    std::optional<Cell> find(TestKind test, int n, double tau2, double mu_n) const;
};

/// One-sided (right) p-value of the one-sample t-test of mean zero.
double one_sample_t_right_p(std::span<const double> sample);

/// Seed of the random stream for one (N, tau2, mu_n) cell. Depends on the
/// cell's values rather than its position, so a cell gives the same draws in
/// any grid that contains it.
std::uint64_t cell_seed(std::uint64_t seed, int n, double tau2, double mu_n) noexcept;

/// Both tests see the same draws within a cell. Deterministic for a given
/// config regardless of thread count.
SimulationGrid run_simulation(const SimConfig& config);

/// CSV with header `test,N,tau2,mu_n,fraction,mc_se`.
std::string grid_csv(const SimulationGrid& grid);

/// Line chart of rejection fraction against mu_n, one line per N.
std::string grid_chart_svg(const SimulationGrid& grid, TestKind test, double tau2);

/// Writes rejection_rates.csv and one chart per (test, tau2) into `dir`.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_grid(const SimulationGrid& grid, const std::filesystem::path& dir);

} // namespace repmeta::sim

#endif // REPMETA_SIMULATION_HPP
