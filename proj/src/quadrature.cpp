#include "latdisp/quadrature.hpp"

namespace latdisp {

namespace gk21 {
// QUADPACK qk21
const std::array<double, 11> nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
const std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208646338285, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
const std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
} // namespace gk21

std::vector<double> oscillation_partition(const std::function<double(double)>& freq_bound,
                                          double a, double b, double max_phase)
{
    std::vector<double> pts{a};
    if (!(b > a)) {
        pts.push_back(b);
        return pts;
    }
    struct Piece {
        double a, b;
        int depth;
    };
    std::vector<Piece> stack{{a, b, 0}};
    std::vector<double> right_ends;
    while (!stack.empty()) {
        const Piece p = stack.back();
        stack.pop_back();
        double fmax = 0.0;
        constexpr int samples = 9;
        for (int i = 0; i < samples; ++i) {
            const double x = p.a + (p.b - p.a) * i / (samples - 1);
            fmax = std::max(fmax, std::abs(freq_bound(x)));
        }
        const double phase = fmax * (p.b - p.a);
        if (phase <= max_phase || p.depth > 40) {
            right_ends.push_back(p.b);
            continue;
        }
        // equal split into enough pieces, then re-check each (freq is not uniform)
        const int parts = std::min(64, std::max(2, static_cast<int>(std::ceil(phase / max_phase))));
        for (int i = parts - 1; i >= 0; --i) {
            const double lo = p.a + (p.b - p.a) * i / parts;
            const double hi = (i == parts - 1) ? p.b : p.a + (p.b - p.a) * (i + 1) / parts;
            stack.push_back({lo, hi, p.depth + 1});
        }
    }
    pts.insert(pts.end(), right_ends.begin(), right_ends.end());
    return pts;
}

std::vector<double> merge_breakpoints(std::vector<double> pts)
{
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double x : pts) {
        if (!out.empty() && std::abs(x - out.back()) <= 1e-15 * std::max(1.0, std::abs(x))) continue;
        out.push_back(x);
    }
    return out;
}

} // namespace latdisp
