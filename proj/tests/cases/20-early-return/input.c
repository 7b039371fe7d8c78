int main() {
    int x;
    x = 4;
    if (x > 0) {
        return x * 25;
    }
    x = x - 100;
    return x;
}
