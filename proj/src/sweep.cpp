#include "shear/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace shear {

void SweepConfig::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(k_min) || !finite(k_max) || !finite(omega_min) || !finite(omega_max))
        throw std::domain_error("sweep: ranges must be finite");
    if (!(k_min < k_max)) throw std::domain_error("sweep: k range is empty");
    if (k_min < 0.0) throw std::domain_error("sweep: k_min must be non-negative");
    if (!(omega_min < omega_max)) throw std::domain_error("sweep: omega range is empty");
    if (nk < 1 || nomega < 1) throw std::domain_error("sweep: nk and nomega must be at least 1");
    if (max_period < 1 || max_period > kMaxSweepPeriod)
        throw std::domain_error("sweep: max_period must be in [1, " + std::to_string(kMaxSweepPeriod) + "]");
    if (grid_n < 1) throw std::domain_error("sweep: grid_n must be at least 1");
    if (!(tol > 0.0)) throw std::domain_error("sweep: tol must be positive");
    for (const auto& t : periods) {
        if (t.p < 1 || t.p > kMaxSweepPeriod)
            throw std::domain_error("sweep: target period " + std::to_string(t.p) + " out of range");
        if (t.q < 0 || t.q >= t.p || std::gcd(t.q, static_cast<std::int64_t>(t.p)) != 1)
            throw std::domain_error("sweep: target " + std::to_string(t.q) + "/" + std::to_string(t.p) +
                                    " is not a reduced rotation number in [0,1)");
    }
}

std::vector<TargetClass> SweepConfig::targets() const {
    if (!periods.empty()) {
        auto out = periods;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    std::vector<TargetClass> out;
    for (int p = 1; p <= max_period; ++p)
        for (std::int64_t q = 0; q < p; ++q)
            if (std::gcd(q, static_cast<std::int64_t>(p)) == 1) out.push_back({p, q});
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_plain(std::string_view text, std::string_view whole) {
    std::string buf(text);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v))
        throw std::invalid_argument("cannot parse number '" + std::string(whole) + "'");
    return v;
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view what) {
    text = trim(text);
    Int v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw std::invalid_argument("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    return v;
}

}  // namespace

double parse_real(std::string_view text) {
    const std::string_view whole = trim(text);
    // Forms: x, a/b, xpi, a/bpi, xpi/b; "pi" alone is pi.
    auto ratio = [&](std::string_view body) {
        if (const auto slash = body.find('/'); slash != std::string_view::npos) {
            const double den = parse_plain(body.substr(slash + 1), whole);
            if (den == 0.0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
            return parse_plain(body.substr(0, slash), whole) / den;
        }
        return parse_plain(body, whole);
    };
    const auto pi_at = whole.find("pi");
    if (pi_at == std::string_view::npos) return ratio(whole);

    const std::string_view head = whole.substr(0, pi_at);
    const std::string_view tail = whole.substr(pi_at + 2);
    double value = kTwoPi / 2.0;
    if (head == "-")
        value = -value;
    else if (!head.empty() && head != "+")
        value *= ratio(head);
    if (!tail.empty()) {
        if (tail.front() != '/' || head.find('/') != std::string_view::npos)
            throw std::invalid_argument("cannot parse number '" + std::string(whole) + "'");
        const double den = parse_plain(tail.substr(1), whole);
        if (den == 0.0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
        value /= den;
    }
    return value;
}

TargetClass parse_target(std::string_view text) {
    text = trim(text);
    if (const auto colon = text.find(':'); colon != std::string_view::npos)
        return {parse_integer<int>(text.substr(0, colon), "period"),
                parse_integer<std::int64_t>(text.substr(colon + 1), "winding")};
    const auto r = text.find('/');
    if (r == std::string_view::npos) throw std::invalid_argument("cannot parse target '" + std::string(text) + "'");
    return {parse_integer<int>(text.substr(r + 1), "period"), parse_integer<std::int64_t>(text.substr(0, r), "winding")};
}

SweepConfig parse_sweep_config(std::string_view text) {
    SweepConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view l = line;
        if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
        l = trim(l);
        if (l.empty()) continue;
        const auto eq = l.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key(trim(l.substr(0, eq)));
        const std::string_view value = trim(l.substr(eq + 1));
        if (key == "k_min") cfg.k_min = parse_real(value);
        else if (key == "k_max") cfg.k_max = parse_real(value);
        else if (key == "omega_min") cfg.omega_min = parse_real(value);
        else if (key == "omega_max") cfg.omega_max = parse_real(value);
        else if (key == "nk") cfg.nk = parse_integer<int>(value, key);
        else if (key == "nomega") cfg.nomega = parse_integer<int>(value, key);
        else if (key == "max_period") cfg.max_period = parse_integer<int>(value, key);
        else if (key == "grid_n") cfg.grid_n = parse_integer<int>(value, key);
        else if (key == "tol") cfg.tol = parse_real(value);
        else if (key == "periods") {
            cfg.periods.clear();
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto item = trim(rest.substr(0, comma));
                if (!item.empty()) cfg.periods.push_back(parse_target(item));
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

// ---------------------------------------------------------------------------

TongueRecord probe_cell(const MapParams& params, const TargetClass& target, int grid_n, double tol) {
    TongueRecord rec;
    rec.k = params.k;
    rec.omega = params.omega;
    rec.p = target.p;
    rec.w_J = target.q;

    const NewtonOptions opts{tol, 50};
    const double p = target.p;
    // Lifts w_J = q + n p with |2 pi w_J / p - omega| <= k.
    const double lo = p * (params.omega - params.k) / kTwoPi;
    const double hi = p * (params.omega + params.k) / kTwoPi;
    const auto n_lo = static_cast<std::int64_t>(std::floor((lo - static_cast<double>(target.q)) / p));
    const auto n_hi = static_cast<std::int64_t>(std::ceil((hi - static_cast<double>(target.q)) / p));

    std::optional<PeriodicOrbit> first;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        const std::int64_t w_J = target.q + n * target.p;
        if (!winding_admissible(params, target.p, w_J)) continue;
        const auto [wt_lo, wt_hi] = theta_winding_range(params, target.p);
        for (std::int64_t wt = wt_lo; wt <= wt_hi; ++wt) {
            for (int i = 0; i < grid_n; ++i) {
                for (int j = 0; j < grid_n; ++j) {
                    const LiftedPoint seed{(i + 0.5) * kTwoPi / grid_n, (j + 0.5) * kTwoPi / grid_n};
                    auto result = find_periodic_orbit(params, target.p, w_J, wt, seed, opts);
                    auto* orbit = std::get_if<PeriodicOrbit>(&result);
                    if (!orbit) continue;
                    if (orbit->stability == Stability::Elliptic) {
                        first = std::move(*orbit);
                        goto done;
                    }
                    if (!first) first = std::move(*orbit);
                }
            }
        }
    }
done:
    if (first) {
        rec.found = true;
        rec.stability = first->stability;
        rec.alpha = acceleration(*first, params);
        rec.residual = first->residual;
    }
    return rec;
}

namespace {

bool record_less(const TongueRecord& a, const TongueRecord& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.omega != b.omega) return a.omega < b.omega;
    if (a.p != b.p) return a.p < b.p;
    return a.w_J < b.w_J;
}

}  // namespace

std::vector<TongueRecord> run_sweep(const SweepConfig& config, unsigned workers) {
    config.validate();
    const auto targets = config.targets();
    const std::size_t cells = static_cast<std::size_t>(config.nk) * static_cast<std::size_t>(config.nomega);
    const std::size_t per_cell = targets.size();
    std::vector<TongueRecord> records(cells * per_cell);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t cell; (cell = next.fetch_add(1)) < cells;) {
            const int i = static_cast<int>(cell / static_cast<std::size_t>(config.nomega));
            const int j = static_cast<int>(cell % static_cast<std::size_t>(config.nomega));
            const MapParams params(config.k_at(i), config.omega_at(j));
            for (std::size_t t = 0; t < per_cell; ++t)
                records[cell * per_cell + t] = probe_cell(params, targets[t], config.grid_n, config.tol);
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(cells, 1)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    std::stable_sort(records.begin(), records.end(), record_less);
    return records;
}

std::vector<TipLocation> tip_locations(const std::vector<TongueRecord>& records) {
    std::map<TargetClass, const TongueRecord*> best;
    for (const auto& r : records) {
        if (!r.found) continue;
        auto [it, inserted] = best.try_emplace(TargetClass{r.p, r.w_J}, &r);
        if (inserted) continue;
        const TongueRecord& cur = *it->second;
        const double a_new = std::abs(r.alpha.value_or(0.0));
        const double a_cur = std::abs(cur.alpha.value_or(0.0));
        const bool better = r.k < cur.k || (r.k == cur.k && (a_new < a_cur || (a_new == a_cur && r.omega < cur.omega)));
        if (better) it->second = &r;
    }
    std::vector<TipLocation> out;
    for (const auto& [cls, rec] : best) out.push_back({cls.p, cls.q, rec->omega, rec->k});
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string format_csv(std::vector<TongueRecord> records) {
    std::stable_sort(records.begin(), records.end(), record_less);
    std::string out = "k,omega,p,w_J,found,stability,alpha,residual\n";
    for (const auto& r : records) {
        out += fmt_real(r.k) + ',' + fmt_real(r.omega) + ',' + std::to_string(r.p) + ',' + std::to_string(r.w_J) + ',';
        out += r.found ? "true," : "false,";
        if (r.stability) out += to_string(*r.stability);
        out += ',';
        if (r.alpha) out += fmt_real(*r.alpha);
        out += ',';
        if (r.residual) out += fmt_real(*r.residual);
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<TongueRecord>& records, const std::filesystem::path& path) {
    write_file(path, format_csv(records));
}

namespace {

constexpr const char* kPalette[kMaxSweepPeriod] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd"};

std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

// Cell edges of a set of sorted, evenly spaced centres.
std::pair<double, double> extent(const std::vector<double>& centres) {
    if (centres.empty()) return {0.0, 1.0};
    if (centres.size() == 1) return {centres.front() - 0.5, centres.front() + 0.5};
    const double h = (centres.back() - centres.front()) / static_cast<double>(centres.size() - 1);
    return {centres.front() - h / 2, centres.back() + h / 2};
}

}  // namespace

std::string format_svg(const std::vector<TongueRecord>& records) {
    constexpr double W = 800, H = 600, left = 70, right = 150, top = 30, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;

    std::vector<double> ks, omegas;
    std::map<std::pair<double, double>, int> least;  // (k, omega) -> least found period
    for (const auto& r : records) {
        ks.push_back(r.k);
        omegas.push_back(r.omega);
        if (!r.found) continue;
        auto [it, inserted] = least.try_emplace({r.k, r.omega}, r.p);
        if (!inserted) it->second = std::min(it->second, r.p);
    }
    for (auto* v : {&ks, &omegas}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    const auto [k0, k1] = extent(ks);
    const auto [w0, w1] = extent(omegas);
    const double cw = omegas.empty() ? 0.0 : pw / static_cast<double>(omegas.size());
    const double ch = ks.empty() ? 0.0 : ph / static_cast<double>(ks.size());
    auto x_of = [&](double w) { return left + (w - w0) / (w1 - w0) * pw; };
    auto y_of = [&](double k) { return top + ph - (k - k0) / (k1 - k0) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<g id=\"cells\" shape-rendering=\"crispEdges\">\n";
    for (const auto& [cell, p] : least) {
        const auto [k, w] = cell;
        os << "<rect x=\"" << svg_num(x_of(w) - cw / 2) << "\" y=\"" << svg_num(y_of(k) - ch / 2) << "\" width=\""
           << svg_num(cw) << "\" height=\"" << svg_num(ch) << "\" fill=\"" << kPalette[(p - 1) % kMaxSweepPeriod]
           << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n";
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (int t = 0; t <= 4; ++t) {
        const double w = w0 + (w1 - w0) * t / 4.0;
        const double k = k0 + (k1 - k0) * t / 4.0;
        const double x = left + pw * t / 4.0;
        const double y = top + ph - ph * t / 4.0;
        os << "<line x1=\"" << svg_num(x) << "\" y1=\"" << top + ph << "\" x2=\"" << svg_num(x) << "\" y2=\""
           << top + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << svg_num(x) << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">" << svg_num(w)
           << "</text>\n";
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << svg_num(y) << "\" x2=\"" << left << "\" y2=\"" << svg_num(y)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << svg_num(y + 4) << "\" text-anchor=\"end\">" << svg_num(k)
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">omega</text>\n";
    os << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << top + ph / 2 << ")\">k</text>\n";

    std::vector<int> periods;
    for (const auto& r : records) periods.push_back(r.p);
    std::sort(periods.begin(), periods.end());
    periods.erase(std::unique(periods.begin(), periods.end()), periods.end());
    const double lx = left + pw + 20;
    os << "<g id=\"legend\">\n<text x=\"" << lx << "\" y=\"" << top + 10 << "\">least period</text>\n";
    for (std::size_t i = 0; i < periods.size(); ++i) {
        const double ly = top + 25 + 20 * static_cast<double>(i);
        os << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"14\" height=\"14\" fill=\""
           << kPalette[(periods[i] - 1) % kMaxSweepPeriod] << "\"/>\n";
        os << "<text x=\"" << lx + 20 << "\" y=\"" << ly + 12 << "\">p = " << periods[i] << "</text>\n";
    }
    os << "</g>\n</g>\n</svg>\n";
    return os.str();
}

void emit_svg(const std::vector<TongueRecord>& records, const std::filesystem::path& path) {
    write_file(path, format_svg(records));
}

}  // namespace shear
