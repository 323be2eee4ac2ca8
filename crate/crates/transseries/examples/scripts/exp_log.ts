expand(1/(1-1/x), 3);
exp(x^2 + 1/x);
log(x + 1);
expand(exp(-1/x), 4);
