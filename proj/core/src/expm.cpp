#include "ddsplit/expm.hpp"

#include <cmath>

namespace ddsplit {
namespace {

using Mat = Eigen::MatrixXd;

void pade3(const Mat& A, const Mat& A2, Mat& U, Mat& V) {
  static const double b[] = {120., 60., 12., 1.};
  const Mat I = Mat::Identity(A.rows(), A.cols());
  U.noalias() = A * (b[3] * A2 + b[1] * I);
  V = b[2] * A2 + b[0] * I;
}

void pade5(const Mat& A, const Mat& A2, const Mat& A4, Mat& U, Mat& V) {
  static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
  const Mat I = Mat::Identity(A.rows(), A.cols());
  U.noalias() = A * (b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade7(const Mat& A, const Mat& A2, const Mat& A4, const Mat& A6, Mat& U,
           Mat& V) {
  static const double b[] = {17297280., 8648640., 1995840., 277200.,
                             25200.,    1512.,    56.,      1.};
  const Mat I = Mat::Identity(A.rows(), A.cols());
  U.noalias() = A * (b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade9(const Mat& A, const Mat& A2, const Mat& A4, const Mat& A6, Mat& U,
           Mat& V) {
  static const double b[] = {17643225600., 8821612800., 2075673600.,
                             302702400.,   30270240.,   2162160.,
                             110880.,      3960.,       90.,
                             1.};
  const Mat I = Mat::Identity(A.rows(), A.cols());
  const Mat A8 = A4 * A4;
  U.noalias() =
      A * (b[9] * A8 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[8] * A8 + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade13(const Mat& A, const Mat& A2, const Mat& A4, const Mat& A6, Mat& U,
            Mat& V) {
  static const double b[] = {64764752532480000., 32382376266240000.,
                             7771770303897600.,  1187353796428800.,
                             129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,
                             1323241920.,        40840800.,
                             960960.,            16380.,
                             182.,               1.};
  const Mat I = Mat::Identity(A.rows(), A.cols());
  Mat tmp = b[13] * A6 + b[11] * A4 + b[9] * A2;
  Mat W;
  W.noalias() = A6 * tmp;
  W += b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
  U.noalias() = A * W;
  tmp = b[12] * A6 + b[10] * A4 + b[8] * A2;
  V.noalias() = A6 * tmp;
  V += b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& A) {
  const double norm = A.cwiseAbs().colwise().sum().maxCoeff();  // L1 norm
  Mat U, V;
  int squarings = 0;

  if (norm < 1.495585217958292e-2) {
    const Mat A2 = A * A;
    pade3(A, A2, U, V);
  } else if (norm < 2.539398330063230e-1) {
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    pade5(A, A2, A4, U, V);
  } else if (norm < 9.504178996162932e-1) {
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    pade7(A, A2, A4, A6, U, V);
  } else if (norm < 2.097847961257068) {
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    pade9(A, A2, A4, A6, U, V);
  } else {
    const double theta13 = 5.371920351148152;
    squarings = std::max(0, static_cast<int>(
                                std::ceil(std::log2(norm / theta13))));
    const Mat As = A / std::exp2(static_cast<double>(squarings));
    const Mat A2 = As * As;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    pade13(As, A2, A4, A6, U, V);
  }

  Mat numer = V + U;
  Mat denom = V - U;
  Mat R = denom.partialPivLu().solve(numer);
  for (int s = 0; s < squarings; ++s) R = (R * R).eval();
  return R;
}

}  // namespace ddsplit
