#pragma once

#include <vector>

#include "psrgan/errors.hpp"

namespace psrgan {

struct LossWeights {
    double lambda_adv = 1.0;
    double lambda_p = 1.0;
    double lambda_dpl = 1.0;
    int p = 2; // 1 or 2

    void validate() const;
};

struct PredictionPair {
    std::vector<double> actual;    // Y
    std::vector<double> predicted; // Y'
    double last_known = 0.0;       // Y_T, the last actual price before the step
};

struct GeneratorLossBreakdown {
    double total = 0;
    double adv = 0;
    double p_norm = 0;
    double dpl = 0;
};

// mean squared error over paired vectors
double baseline_loss(const std::vector<double>& predicted,
                     const std::vector<double>& actual);

// sigmoid cross-entropy over logits, targets in {0,1}; stable softplus form
double l_sce(const std::vector<double>& logits, const std::vector<double>& targets);

// L_sce(D(Y'), 1) for a single fake logit
double l_adv_g(double d_logit_on_fake);

double l_p(const std::vector<double>& actual, const std::vector<double>& predicted,
           int p);

// |sign(Y'_{T+1} - Y_T) - sign(Y_{T+1} - Y_T)|, sign(0) = 0, so values in {0,1,2}
double l_dpl(double y_last, double y_next, double y_pred_next);

GeneratorLossBreakdown generator_loss(const PredictionPair& pair,
                                      double d_logit_on_fake, const LossWeights& w);

// standard GAN discriminator objective: sce(real, 1) + sce(fake, 0)
double discriminator_loss(double d_logit_real, double d_logit_fake);

} // namespace psrgan
