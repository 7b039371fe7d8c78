int is_prime(int n) {
    int d;
    if (n < 2) {
        return 0;
    }
    for (d = 2; d * d <= n; d = d + 1) {
        if (n % d == 0) {
            return 0;
        }
    }
    return 1;
}
int main() {
    int i;
    int count;
    count = 0;
    for (i = 0; i < 50; i = i + 1) {
        count = count + is_prime(i);
    }
    return count;
}
