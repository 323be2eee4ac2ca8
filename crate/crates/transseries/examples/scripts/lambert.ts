# Lambert W identity: (U + 1 - x*exp(-x))*(1 + V) = 1.
basis(x, exp(x));
let U = dsolve((x-1)*exp(-2*x) + (1/x - exp(-x) + exp(-x)/x)*d(F) + (1 - x*exp(-x))*F + F*d(F)/x + F^2);
let V = dsolve(exp(x)*(U + d(U)/x)*(F + 1) - F'/x);
zerotest((U + 1 - x*exp(-x))*(1 + V) - 1);
