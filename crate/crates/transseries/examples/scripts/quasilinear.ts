# Distinguished solution of a quasi-linear equation over (x, exp(x)).
basis(x, exp(x));
let P = (x-1)*exp(-2*x) + (1/x - exp(-x) + exp(-x)/x)*d(F) + (1 - x*exp(-x))*F + F*d(F)/x + F^2;
let U = dsolve(P);
