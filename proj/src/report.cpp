#include "skglass/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace skglass {

ExtrapolationResult extrapolate_entropy(const std::vector<int>& n_list,
                                        const std::vector<double>& s_means,
                                        const std::vector<double>& s_std_errors) {
    const std::size_t k = n_list.size();
    if (s_means.size() != k || s_std_errors.size() != k) {
        throw std::invalid_argument("n_list, means and std errors must have equal length");
    }
    std::set<int> distinct(n_list.begin(), n_list.end());
    if (distinct.size() < 3) throw std::invalid_argument("need >= 3 distinct n values");

    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (n_list[i] < 1) throw std::invalid_argument("n values must be >= 1");
        const double x = 1.0 / n_list[i];
        // Zero SEs (synthetic exact inputs) get a floor instead of an
        // infinite weight.
        const double se = std::max(s_std_errors[i], 1e-12);
        const double w = 1.0 / (se * se);
        sw += w;
        swx += w * x;
        swy += w * s_means[i];
        swxx += w * x * x;
        swxy += w * x * s_means[i];
    }
    const double det = sw * swxx - swx * swx;
    if (det <= 0.0) throw std::invalid_argument("degenerate design matrix");

    ExtrapolationResult fit;
    fit.intercept = (swxx * swy - swx * swxy) / det;
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept_std_error = std::sqrt(swxx / det);
    fit.ci_low = fit.intercept - 1.96 * fit.intercept_std_error;
    fit.ci_high = fit.intercept + 1.96 * fit.intercept_std_error;
    fit.points = static_cast<int>(k);
    return fit;
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "n,beta,f_mean,f_se,s_mean,s_se,u_mean,u_se\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n);
        for (double v : {r.beta, r.f_mean, r.f_se, r.s_mean, r.s_se, r.u_mean, r.u_se}) {
            out += ',';
            out += format_number(v);
        }
        out += '\n';
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::string json_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

void append_kv(std::string& out, const char* key, const std::string& raw_value, bool last = false) {
    out += '"';
    out += key;
    out += "\":";
    out += raw_value;
    if (!last) out += ',';
}

std::string quoted(std::string_view s) { return '"' + json_escape(s) + '"'; }

std::string render_json(const SweepReport& r, const std::string& generated_at,
                        const std::string& content_hash) {
    std::string out = "{";
    append_kv(out, "schema_version", quoted(r.schema_version));

    out += "\"metadata\":{";
    append_kv(out, "generated_at", quoted(generated_at));
    append_kv(out, "master_seed", std::to_string(r.master_seed));
    append_kv(out, "sample_count", std::to_string(r.sample_count));
    out += "\"n_list\":[";
    for (std::size_t i = 0; i < r.n_list.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(r.n_list[i]);
    }
    out += "],\"betas\":[";
    for (std::size_t i = 0; i < r.betas.size(); ++i) {
        if (i) out += ',';
        out += format_number(r.betas[i]);
    }
    out += "],";
    append_kv(out, "extrapolation_model", quoted(r.extrapolation_model));
    append_kv(out, "content_hash", quoted(content_hash), true);
    out += "},";

    out += "\"rows\":[";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        if (i) out += ',';
        out += "{";
        append_kv(out, "n", std::to_string(row.n));
        append_kv(out, "beta", format_number(row.beta));
        append_kv(out, "f_mean", format_number(row.f_mean));
        append_kv(out, "f_se", format_number(row.f_se));
        append_kv(out, "s_mean", format_number(row.s_mean));
        append_kv(out, "s_se", format_number(row.s_se));
        append_kv(out, "u_mean", format_number(row.u_mean));
        append_kv(out, "u_se", format_number(row.u_se), true);
        out += "}";
    }
    out += "],";

    const auto& p = r.predictions;
    out += "\"predictions\":{";
    append_kv(out, "beta1", format_number(p.beta1));
    append_kv(out, "beta_star", format_number(p.beta_star));
    append_kv(out, "f_beta1", format_number(p.f_beta1));
    append_kv(out, "f_beta_star", format_number(p.f_beta_star));
    append_kv(out, "annealed_f_beta_star", format_number(p.annealed_f_beta_star));
    append_kv(out, "alpha_infinity", format_number(p.alpha_infinity));
    append_kv(out, "a_infinity", format_number(p.a_infinity));
    append_kv(out, "kl_prediction", format_number(p.kl_prediction));
    append_kv(out, "cross_entropy_prediction", format_number(p.cross_entropy_prediction));
    append_kv(out, "kl_uniform_at_beta_star", format_number(p.kl_uniform_at_beta_star));
    append_kv(out, "entropy_at_beta_star", format_number(p.entropy_at_beta_star));
    append_kv(out, "spherical_bound", format_number(p.spherical_bound), true);
    out += "},";

    out += "\"extrapolation\":[";
    for (std::size_t i = 0; i < r.extrapolation.size(); ++i) {
        const auto& e = r.extrapolation[i];
        if (i) out += ',';
        out += "{";
        append_kv(out, "beta", format_number(e.beta));
        append_kv(out, "intercept", format_number(e.fit.intercept));
        append_kv(out, "slope", format_number(e.fit.slope));
        append_kv(out, "intercept_se", format_number(e.fit.intercept_std_error));
        append_kv(out, "ci_low", format_number(e.fit.ci_low));
        append_kv(out, "ci_high", format_number(e.fit.ci_high));
        append_kv(out, "points", std::to_string(e.fit.points), true);
        out += "}";
    }
    out += "]}";
    return out;
}

} // namespace

std::string to_json(const SweepReport& report) {
    const std::string canonical = render_json(report, "", "");
    char hash[32];
    std::snprintf(hash, sizeof(hash), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical)));
    return render_json(report, report.generated_at, hash);
}

ZeroCrossResult zero_cross(const std::function<ExtrapolationResult(double)>& intercept_at,
                           double beta_low, double beta_high, double beta_tolerance) {
    if (!(beta_low < beta_high)) throw std::invalid_argument("need beta_low < beta_high");
    if (!(beta_tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");

    constexpr double kEps = 1e-6;
    std::map<double, ExtrapolationResult> memo;
    auto fit_at = [&](double beta) -> const ExtrapolationResult& {
        auto it = memo.find(beta);
        if (it == memo.end()) it = memo.emplace(beta, intercept_at(beta)).first;
        return it->second;
    };

    ZeroCrossResult result;
    const auto& low_fit = fit_at(beta_low);
    const auto& high_fit = fit_at(beta_high);
    result.intercept_at_low = low_fit.intercept;
    result.intercept_at_high = high_fit.intercept;

    // curve(fit) selects which band of the fit is bisected.
    auto bisect = [&](const std::function<double(const ExtrapolationResult&)>& curve) {
        double lo = beta_low, hi = beta_high;
        while (hi - lo > beta_tolerance) {
            const double mid = 0.5 * (lo + hi);
            if (curve(fit_at(mid)) < kEps) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    auto center = [](const ExtrapolationResult& f) { return f.intercept; };
    auto lower = [](const ExtrapolationResult& f) {
        return f.intercept - 1.96 * f.intercept_std_error;
    };
    auto upper = [](const ExtrapolationResult& f) {
        return f.intercept + 1.96 * f.intercept_std_error;
    };

    if (center(low_fit) >= kEps && center(high_fit) < kEps) {
        result.crossed = true;
        result.beta_cross = bisect(center);
        result.ci_low = lower(low_fit) < kEps ? beta_low : bisect(lower);
        result.ci_high = upper(high_fit) >= kEps ? beta_high : bisect(upper);
    }
    result.evaluations = static_cast<int>(memo.size());
    return result;
}

} // namespace skglass
