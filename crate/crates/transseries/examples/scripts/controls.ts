basis(x, exp(x));
let U = dsolve((x-1)*exp(-2*x) + (1/x - exp(-x) + exp(-x)/x)*d(F) + (1 - x*exp(-x))*F + F*d(F)/x + F^2);
let V = dsolve(exp(x)*(U + d(U)/x)*(F + 1) - F'/x);
let Q = (U + 1 - x*exp(-x))*(1 + V) - 1;
zerotest(Q + exp(-5*x));
zerotest(Q + 1/x);
zerotest(3);
