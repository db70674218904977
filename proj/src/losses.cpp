#include "psrgan/losses.hpp"

#include <cmath>

namespace psrgan {

namespace {

// -log sigmoid(a) when b=1, -log(1 - sigmoid(a)) when b=0, in softplus form
double sce_term(double logit, double target) {
    return std::max(logit, 0.0) - logit * target + std::log1p(std::exp(-std::fabs(logit)));
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

} // namespace

void LossWeights::validate() const {
    if (lambda_adv < 0 || lambda_p < 0 || lambda_dpl < 0)
        throw InvalidParams("loss weights must be non-negative");
    if (lambda_adv == 0 && lambda_p == 0 && lambda_dpl == 0)
        throw InvalidParams("at least one loss weight must be positive");
    if (p != 1 && p != 2) throw InvalidParams("p must be 1 or 2");
}

double baseline_loss(const std::vector<double>& predicted,
                     const std::vector<double>& actual) {
    if (predicted.size() != actual.size() || predicted.empty())
        throw LengthMismatch("baseline_loss: vector lengths");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - actual[i];
        sum += d * d;
    }
    return sum / static_cast<double>(predicted.size());
}

double l_sce(const std::vector<double>& logits, const std::vector<double>& targets) {
    if (logits.size() != targets.size())
        throw LengthMismatch("l_sce: logits vs targets");
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        if (targets[i] != 0.0 && targets[i] != 1.0)
            throw TargetOutOfRange("l_sce target must be 0 or 1");
        sum += sce_term(logits[i], targets[i]);
    }
    return sum;
}

double l_adv_g(double d_logit_on_fake) { return sce_term(d_logit_on_fake, 1.0); }

double l_p(const std::vector<double>& actual, const std::vector<double>& predicted,
           int p) {
    if (actual.size() != predicted.size())
        throw LengthMismatch("l_p: vector lengths");
    if (p != 1 && p != 2) throw InvalidParams("p must be 1 or 2");
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = std::fabs(actual[i] - predicted[i]);
        acc += p == 1 ? d : d * d;
    }
    return p == 1 ? acc : std::sqrt(acc);
}

double l_dpl(double y_last, double y_next, double y_pred_next) {
    return std::fabs(sign(y_pred_next - y_last) - sign(y_next - y_last));
}

GeneratorLossBreakdown generator_loss(const PredictionPair& pair,
                                      double d_logit_on_fake, const LossWeights& w) {
    w.validate();
    if (pair.actual.size() != pair.predicted.size() || pair.actual.empty())
        throw LengthMismatch("generator_loss: prediction pair lengths");
    GeneratorLossBreakdown out;
    out.adv = l_adv_g(d_logit_on_fake);
    out.p_norm = l_p(pair.actual, pair.predicted, w.p);
    out.dpl = l_dpl(pair.last_known, pair.actual.back(), pair.predicted.back());
    out.total = w.lambda_adv * out.adv + w.lambda_p * out.p_norm + w.lambda_dpl * out.dpl;
    return out;
}

double discriminator_loss(double d_logit_real, double d_logit_fake) {
    return sce_term(d_logit_real, 1.0) + sce_term(d_logit_fake, 0.0);
}

} // namespace psrgan
