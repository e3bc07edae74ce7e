#include "repmeta/simulation.hpp"

#include "repmeta/distributions.hpp"
#include "repmeta/errors.hpp"
#include "repmeta/meta.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <thread>

namespace repmeta::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct CellKey
{
    int n;
    double tau2;
    double mu_n;
};

struct CellCounts
{
    std::uint64_t z_rejections = 0;
    std::uint64_t t_rejections = 0;
};

CellCounts simulate_cell(const SimConfig& config, const CellKey& key)
{
    std::mt19937_64 rng(cell_seed(config.seed, key.n, key.tau2, key.mu_n));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = static_cast<std::size_t>(key.n);
    const double tau = std::sqrt(key.tau2);

    std::vector<double> theta(n);
    const std::vector<double> ses(n, config.within_sd);
    CellCounts counts;
    for (std::uint64_t it = 0; it < config.iterations; ++it) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double mu = tau * normal(rng);
            theta[i] = mu + config.within_sd * normal(rng);
        }
        theta[n - 1] = key.mu_n + config.within_sd * normal(rng);

        const MetaResult z = random_effects_meta(theta, ses, MetaModel::random_z, config.alpha);
        if (z.p_right <= config.alpha) ++counts.z_rejections;
        if (one_sample_t_right_p(theta) <= config.alpha) ++counts.t_rejections;
    }
    return counts;
}

Cell make_cell(TestKind test, const CellKey& key, std::uint64_t rejections, std::uint64_t iterations)
{
    Cell c;
    c.test = test;
    c.n = key.n;
    c.tau2 = key.tau2;
    c.mu_n = key.mu_n;
    c.rejections = rejections;
    c.iterations = iterations;
    c.fraction = static_cast<double>(rejections) / static_cast<double>(iterations);
    c.mc_se = std::sqrt(c.fraction * (1.0 - c.fraction) / static_cast<double>(iterations));
    return c;
}

} // namespace

std::vector<double> SimConfig::mu_grid(double step, double max)
{
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor(max / step + 1e-9));
    for (long i = 0; i <= count; ++i) grid.push_back(std::round(static_cast<double>(i) * step * 1e9) / 1e9);
    return grid;
}

SimConfig SimConfig::full(std::uint64_t seed)
{
    SimConfig c;
    c.seed = seed;
    return c;
}

SimConfig SimConfig::desk(std::uint64_t seed)
{
    SimConfig c;
    c.seed = seed;
    c.n_values = {3, 9};
    c.tau2_values = {0.01, 0.25};
    c.mu_n_grid = {0.0, 0.1, 0.3, 1.0};
    return c;
}

void SimConfig::validate() const
{
    if (n_values.empty() || tau2_values.empty() || mu_n_grid.empty()) throw InputError("simulation grid is empty");
    for (int n : n_values) {
        if (n < 2) throw InputError("simulation N must be at least 2");
    }
    for (double t : tau2_values) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("simulation tau2 must be finite and nonnegative");
    }
    for (double m : mu_n_grid) {
        if (!std::isfinite(m)) throw InputError("simulation mu_n must be finite");
    }
    if (!(within_sd > 0.0) || !std::isfinite(within_sd)) throw InputError("within_sd must be positive");
    if (iterations == 0) throw InputError("iterations must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
}

std::string_view to_string(TestKind test) noexcept
{
    return test == TestKind::z_higgins ? "z_higgins" : "t_plain";
}

std::optional<Cell> SimulationGrid::find(TestKind test, int n, double tau2, double mu_n) const
{
    for (const Cell& c : cells) {
        if (c.test == test && c.n == n && std::fabs(c.tau2 - tau2) < 1e-12 && std::fabs(c.mu_n - mu_n) < 1e-12) {
            return c;
        }
    }
    return std::nullopt;
}

double one_sample_t_right_p(std::span<const double> sample)
{
    const std::size_t n = sample.size();
    if (n < 2) throw PreconditionError("t-test needs at least 2 observations");
    double mean = 0.0;
    for (double x : sample) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : sample) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) return mean > 0.0 ? 0.0 : (mean < 0.0 ? 1.0 : 0.5);
    const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
    return dist::t_cdf(-t, static_cast<double>(n - 1));
}

std::uint64_t cell_seed(std::uint64_t seed, int n, double tau2, double mu_n) noexcept
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(tau2));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(mu_n));
    return h;
}

SimulationGrid run_simulation(const SimConfig& config)
{
    config.validate();
    std::vector<CellKey> keys;
    for (int n : config.n_values) {
        for (double tau2 : config.tau2_values) {
            for (double mu : config.mu_n_grid) keys.push_back({n, tau2, mu});
        }
    }

    std::vector<CellCounts> counts(keys.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < keys.size(); i = next++) counts[i] = simulate_cell(config, keys[i]);
    };
    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, keys.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    SimulationGrid grid;
    grid.config = config;
    for (TestKind test : {TestKind::z_higgins, TestKind::t_plain}) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const auto rejections = test == TestKind::z_higgins ? counts[i].z_rejections : counts[i].t_rejections;
            grid.cells.push_back(make_cell(test, keys[i], rejections, config.iterations));
        }
    }
    return grid;
}

std::string grid_csv(const SimulationGrid& grid)
{
    std::string s = "test,N,tau2,mu_n,fraction,mc_se\n";
    auto out = std::back_inserter(s);
    for (const Cell& c : grid.cells) {
        fmt::format_to(out, "{},{},{},{},{},{}\n", to_string(c.test), c.n, c.tau2, c.mu_n, c.fraction, c.mc_se);
    }
    return s;
}

std::string grid_chart_svg(const SimulationGrid& grid, TestKind test, double tau2)
{
    constexpr double width = 640.0;
    constexpr double height = 420.0;
    constexpr double x0 = 70.0;
    constexpr double x1 = 600.0;
    constexpr double y0 = 360.0; // bottom
    constexpr double y1 = 50.0;  // top
    static constexpr const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                              "#66a61e", "#e6ab02", "#a6761d", "#666666"};

    const auto& cfg = grid.config;
    const auto [mu_min_it, mu_max_it] = std::minmax_element(cfg.mu_n_grid.begin(), cfg.mu_n_grid.end());
    const double mu_min = *mu_min_it;
    const double mu_max = *mu_max_it > mu_min ? *mu_max_it : mu_min + 1.0;
    double f_max = cfg.alpha;
    for (const Cell& c : grid.cells) {
        if (c.test == test && std::fabs(c.tau2 - tau2) < 1e-12) f_max = std::max(f_max, c.fraction);
    }
    const double y_max = std::max(0.1, std::ceil(f_max / 0.05) * 0.05);
    auto x_of = [&](double mu) { return x0 + (mu - mu_min) / (mu_max - mu_min) * (x1 - x0); };
    auto y_of = [&](double f) { return y0 - f / y_max * (y0 - y1); };

    std::string s;
    auto out = std::back_inserter(s);
    fmt::format_to(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    fmt::format_to(out,
                   "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
                   "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                   width, height);
    fmt::format_to(out, "<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"28\" font-size=\"14\" font-weight=\"bold\">{}: tau2 = {}</text>\n", x0,
                   to_string(test), tau2);
    fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n", x0, y0,
                   x1);
    fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", x0, y0,
                   y1);
    for (double f = 0.0; f <= y_max + 1e-9; f += 0.05) {
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.2f}</text>\n", x0 - 6.0,
                       y_of(f) + 4.0, f);
    }
    for (int i = 0; i <= 5; ++i) {
        const double mu = mu_min + (mu_max - mu_min) * i / 5.0;
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n", x_of(mu), y0 + 18.0,
                       mu);
    }
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">mu_N</text>\n", 0.5 * (x0 + x1),
                   y0 + 40.0);
    fmt::format_to(out,
                   "<line class=\"alpha\" x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"grey\" "
                   "stroke-dasharray=\"4,3\"/>\n",
                   x0, x1, y_of(cfg.alpha));

    for (std::size_t k = 0; k < cfg.n_values.size(); ++k) {
        const int n = cfg.n_values[k];
        const char* colour = palette[k % std::size(palette)];
        std::string points;
        for (double mu : cfg.mu_n_grid) {
            if (const auto c = grid.find(test, n, tau2, mu)) {
                if (!points.empty()) points += ' ';
                points += fmt::format("{:.2f},{:.2f}", x_of(mu), y_of(c->fraction));
            }
        }
        fmt::format_to(out, "<polyline class=\"series\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                       colour, points);
        const double ly = y1 + 16.0 * static_cast<double>(k);
        fmt::format_to(out, "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\"/>\n", x1 - 70.0,
                       ly, x1 - 50.0, ly, colour);
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\">N = {}</text>\n", x1 - 44.0, ly + 4.0, n);
    }
    fmt::format_to(out, "</svg>\n");
    return s;
}

std::vector<std::filesystem::path> emit_grid(const SimulationGrid& grid, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        f << text;
        if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
        written.push_back(path);
    };
    write(dir / "rejection_rates.csv", grid_csv(grid));
    for (TestKind test : {TestKind::z_higgins, TestKind::t_plain}) {
        for (double tau2 : grid.config.tau2_values) {
            write(dir / fmt::format("{}_tau2_{}.svg", to_string(test), tau2), grid_chart_svg(grid, test, tau2));
        }
    }
    return written;
}

} // namespace repmeta::sim
