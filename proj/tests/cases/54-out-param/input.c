void divmod(int a, int b, int *q, int *r) {
    *q = a / b;
    *r = a % b;
}
int main() {
    int q;
    int r;
    divmod(47, 7, &q, &r);
    return q * 10 + r;
}
