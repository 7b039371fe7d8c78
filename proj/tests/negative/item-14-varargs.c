int sum(int n, ...) {
    return n;
}

int main() {
    return sum(1);
}
