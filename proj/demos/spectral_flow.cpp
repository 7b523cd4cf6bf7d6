// Walkthrough: build the inverse-golden-mean algebra, evaluate the KMS state
// on a few generators, and compute exact spectral flow values.

#include <iostream>

#include "qlambda/qlambda.hpp"

using namespace qlambda;

int main() {
    // lambda^2 + lambda - 1 = 0, lambda = (sqrt 5 - 1)/2, isolated in [1/2, 2/3]
    RingPtr ring = GammaRing::create(
        parse_lambda_spec("alg:x^2+x-1;root=[1/2,2/3]"));

    std::cout << "lambda ~ " << decimal_string(GammaElement::lambda(ring).approx(40), 10) << "\n";
    std::cout << "m_1 = " << m_k(ring, 1).get_str() << ", m_2 = " << m_k(ring, 2).get_str()
              << "\n";

    AlgebraElement e = AlgebraElement::unit_e(ring);
    std::cout << "psi(e) = " << e.psi().to_string() << "\n";

    AlgebraElement s10 = make_S(ring, 1, 0);
    std::cout << "S_{1,0} = " << s10.to_string() << "\n";
    std::cout << "S* S = " << (s10.adjoint() * s10).to_string() << "\n";

    MatrixElement u = build_u_double_index(ring, 2, 0, 1, 0);
    LambdaScalar sf = sf_unitary(u);
    std::cout << "sf(u_{{2,0},{1,0}}) = " << sf.to_string() << " ~ "
              << decimal_string(sf.approx(40), 10) << "\n";

    KTheoryResult kt = k_groups(ring->spec());
    std::cout << "K_0 = " << kt.k0.to_string() << ", K_1 = " << kt.k1.to_string() << "\n";
    return 0;
}
