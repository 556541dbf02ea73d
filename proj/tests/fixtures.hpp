#pragma once

#include "fars/model.hpp"

// Shared test fixtures. The nine-item, three-factor model mirrors
// data/example_model.json; the frozen reliabilities were computed with an
// independent double-precision implementation and are pinned to full
// precision.
namespace fixtures {

inline fars::Matrix nine_item_lambda() {
    fars::Matrix lambda(9, 3);
    lambda << 0.50, -0.10, 0.10,
              0.50,  0.10, 0.10,
              0.50,  0.10, -0.10,
             -0.10,  0.50, 0.15,
              0.15,  0.50, 0.10,
             -0.15,  0.50, 0.10,
              0.10,  0.10, 0.60,
              0.10, -0.10, 0.60,
              0.10,  0.10, 0.60;
    return lambda;
}

inline fars::Matrix nine_item_phi() {
    fars::Matrix phi(3, 3);
    phi << 1.0, 0.3, 0.2,
           0.3, 1.0, 0.1,
           0.2, 0.1, 1.0;
    return phi;
}

inline fars::FactorModel nine_item_model() {
    return fars::standardized_from_pattern(nine_item_lambda(), nine_item_phi());
}

// Frozen expectations for the nine-item model.
inline constexpr double kNineItemRegression[3] = {
    0.594282236023147, 0.5654041605037725, 0.6779121708322567};
inline constexpr double kNineItemBartlett[3] = {
    0.5266953232996097, 0.5195364013746993, 0.6335217918384529};
inline constexpr double kNineItemMcdonald[3] = {
    0.5141869300573996, 0.5107851532191631, 0.6323399816480477};
inline constexpr double kNineItemDeterminacy[3] = {
    0.7475766759493242, 0.7350901744598866, 0.8108743714240977};

// One factor, p items, loading l everywhere.
inline fars::FactorModel one_factor_model(fars::Index p, double l) {
    fars::Matrix lambda = fars::Matrix::Constant(p, 1, l);
    fars::Matrix phi = fars::Matrix::Identity(1, 1);
    return fars::standardized_from_pattern(lambda, phi);
}

// Gap in the information-matrix identity
// lambda' sigma^-1 lambda = ((lambda' psi^-2 lambda)^-1 + phi)^-1.
inline double information_identity_gap(const fars::FactorModel& model,
                                       const fars::CovarianceMatrix& sigma) {
    const fars::Matrix lhs =
        model.lambda.transpose() * sigma.sigma.llt().solve(model.lambda);
    const fars::Matrix g = model.lambda.transpose() *
                           model.psi2.cwiseInverse().asDiagonal() * model.lambda;
    const fars::Matrix rhs = (g.inverse() + model.phi).inverse();
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

} // namespace fixtures
