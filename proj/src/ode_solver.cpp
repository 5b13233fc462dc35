#include "hardedge/ode_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hardedge/special_functions.hpp"

namespace hardedge {

namespace {

constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;
constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;
constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;
constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;
constexpr double e31 = 0.244094488188976377952755905512e+00;
constexpr double e32 = 0.733846688281611857341361741547e+00;
constexpr double e33 = 0.220588235294117647058823529412e-01;
constexpr double e51 = 0.1312004499419488073250102996e-01;
constexpr double e56 = -0.1225156446376204440720569753e+01;
constexpr double e57 = -0.4957589496572501915214079952e+00;
constexpr double e58 = 0.1664377182454986536961530415e+01;
constexpr double e59 = -0.3503288487499736816886487290e+00;
constexpr double e510 = 0.3341791187130174790297318841e+00;
constexpr double e511 = 0.8192320648511571246570742613e-01;
constexpr double e512 = -0.2235530786388629525884427845e-01;
constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;

using State = Dop853::State;

double error_norm(const State& e, const State& y0, const State& y1, double rtol, double atol) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        sum += std::norm(e(i)) / (sc * sc);
    }
    return sum;
}

}  // namespace

Dop853::Dop853(Rhs rhs, Options options) : rhs_(std::move(rhs)), opt_(options) {
    if (!(opt_.rtol > 0.0) || !(opt_.atol >= 0.0)) throw DomainError("Dop853: tolerances must be positive");
}

std::vector<Dop853::State> Dop853::solve(double t0, const State& y0, const std::vector<double>& outputs,
                                         const Observer& observer) {
    stats_ = {};
    interrupted_ = false;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (outputs[i] < t0 || (i > 0 && outputs[i] < outputs[i - 1]))
            throw DomainError("Dop853: outputs must be increasing and not before t0");
    }
    const Eigen::Index n = y0.size();
    std::vector<State> result;
    result.reserve(outputs.size());
    std::size_t next_out = 0;
    while (next_out < outputs.size() && outputs[next_out] == t0) {
        result.push_back(y0);
        ++next_out;
    }
    last_t_ = t0;
    if (next_out == outputs.size()) return result;
    const double t_end = outputs.back();

    auto f = [&](double t, const State& y, State& dy) {
        rhs_(t, y, dy);
        ++stats_.evaluations;
    };

    State y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), k8(n), k9(n), k10(n), yw(n), yw2(n), kn(n);
    State r1(n), r2(n), r3(n), r4(n), r5(n), r6(n), r7(n), r8(n);
    double t = t0;
    f(t, y, k1);

    double h = opt_.h_initial;
    if (!(h > 0.0)) {
        const double d0 = std::sqrt(error_norm(y, y, y, opt_.rtol, opt_.atol) / n);
        const double d1 = std::sqrt(error_norm(k1, y, y, opt_.rtol, opt_.atol) / n);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, t_end - t0);
    }
    h = std::min(h, opt_.h_max);

    const double safe = 0.9, min_scale = 0.333, max_scale = 6.0, expo = 1.0 / 8.0;
    bool last_rejected = false;

    while (next_out < outputs.size()) {
        if (stats_.accepted + stats_.rejected >= opt_.max_steps)
            throw ConvergenceError("Dop853: maximum number of steps exceeded");
        if (h < 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
            throw ConvergenceError("Dop853: step size underflow");
        if (t + h > t_end) h = t_end - t;

        yw = y + h * (a21 * k1);
        f(t + c2 * h, yw, k2);
        yw = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, yw, k3);
        yw = y + h * (a41 * k1 + a43 * k3);
        f(t + c4 * h, yw, k4);
        yw = y + h * (a51 * k1 + a53 * k3 + a54 * k4);
        f(t + c5 * h, yw, k5);
        yw = y + h * (a61 * k1 + a64 * k4 + a65 * k5);
        f(t + c6 * h, yw, k6);
        yw = y + h * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + c7 * h, yw, k7);
        yw = y + h * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7);
        f(t + c8 * h, yw, k8);
        yw = y + h * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 + a97 * k7 + a98 * k8);
        f(t + c9 * h, yw, k9);
        yw = y + h * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 + a107 * k7 + a108 * k8 + a109 * k9);
        f(t + c10 * h, yw, k10);
        yw = y + h * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 + a117 * k7 + a118 * k8 + a119 * k9 +
                      a1110 * k10);
        f(t + c11 * h, yw, k2);
        yw = y + h * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 + a127 * k7 + a128 * k8 + a129 * k9 +
                      a1210 * k10 + a1211 * k2);
        f(t + h, yw, k3);
        k4 = b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 + b10 * k10 + b11 * k2 + b12 * k3;
        yw = y + h * k4;

        const State e3 = k4 - e31 * k1 - e32 * k9 - e33 * k3;
        const State e5 = e51 * k1 + e56 * k6 + e57 * k7 + e58 * k8 + e59 * k9 + e510 * k10 + e511 * k2 + e512 * k3;
        const double err5 = error_norm(e5, y, yw, opt_.rtol, opt_.atol);
        const double err3 = error_norm(e3, y, yw, opt_.rtol, opt_.atol);
        const double denom = err5 + 0.01 * err3;
        double err = denom > 0.0 ? h * err5 / std::sqrt(n * denom) : 0.0;
        if (!std::isfinite(err)) err = 1e10;

        if (err > 1.0) {
            h *= std::max(safe * std::pow(err, -expo), min_scale);
            ++stats_.rejected;
            last_rejected = true;
            continue;
        }

        // Accepted step.
        f(t + h, yw, kn);
        r1 = y;
        r2 = yw - y;
        r3 = h * k1 - r2;
        r4 = r2 - h * kn - r3;
        r5 = d41 * k1 + d46 * k6 + d47 * k7 + d48 * k8 + d49 * k9 + d410 * k10 + d411 * k2 + d412 * k3;
        r6 = d51 * k1 + d56 * k6 + d57 * k7 + d58 * k8 + d59 * k9 + d510 * k10 + d511 * k2 + d512 * k3;
        r7 = d61 * k1 + d66 * k6 + d67 * k7 + d68 * k8 + d69 * k9 + d610 * k10 + d611 * k2 + d612 * k3;
        r8 = d71 * k1 + d76 * k6 + d77 * k7 + d78 * k8 + d79 * k9 + d710 * k10 + d711 * k2 + d712 * k3;
        const double t_new = t + h;
        if (next_out < outputs.size() && outputs[next_out] <= t_new) {
            yw2 = y + h * (a141 * k1 + a147 * k7 + a148 * k8 + a149 * k9 + a1410 * k10 + a1411 * k2 + a1412 * k3 +
                           a1413 * kn);
            f(t + c14 * h, yw2, k10);
            yw2 = y + h * (a151 * k1 + a156 * k6 + a157 * k7 + a158 * k8 + a1511 * k2 + a1512 * k3 + a1513 * kn +
                           a1514 * k10);
            f(t + c15 * h, yw2, k2);
            yw2 = y + h * (a161 * k1 + a166 * k6 + a167 * k7 + a168 * k8 + a169 * k9 + a1613 * kn + a1614 * k10 +
                           a1615 * k2);
            f(t + c16 * h, yw2, k3);
            r5 = h * (r5 + d413 * kn + d414 * k10 + d415 * k2 + d416 * k3);
            r6 = h * (r6 + d513 * kn + d514 * k10 + d515 * k2 + d516 * k3);
            r7 = h * (r7 + d613 * kn + d614 * k10 + d615 * k2 + d616 * k3);
            r8 = h * (r8 + d713 * kn + d714 * k10 + d715 * k2 + d716 * k3);
            while (next_out < outputs.size() && outputs[next_out] <= t_new) {
                const double s = (outputs[next_out] - t) / h;
                const double s1 = 1.0 - s;
                if (outputs[next_out] == t_new) {
                    result.push_back(yw);
                } else {
                    const State a6 = r7 + s * r8;
                    const State a5 = r6 + s1 * a6;
                    const State a4 = r5 + s * a5;
                    const State a3 = r4 + s1 * a4;
                    const State a2 = r3 + s * a3;
                    const State a1 = r2 + s1 * a2;
                    result.push_back(r1 + s * a1);
                }
                ++next_out;
            }
        }
        ++stats_.accepted;
        t = t_new;
        y = yw;
        k1 = kn;
        last_t_ = t;

        double scale = err == 0.0 ? max_scale : std::clamp(safe * std::pow(err, -expo), min_scale, max_scale);
        if (last_rejected) scale = std::min(scale, 1.0);
        last_rejected = false;
        h = std::min(h * scale, opt_.h_max);

        if (observer && !observer(t, y)) {
            interrupted_ = true;
            break;
        }
    }
    return result;
}

}  // namespace hardedge
