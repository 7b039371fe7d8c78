int mix(int a, int b, int c, int d) {
    return a * 1000 + b * 100 + c * 10 + d;
}
int main() {
    return mix(1, 2, 3, 4) - mix(0, 1, 1, 0);
}
