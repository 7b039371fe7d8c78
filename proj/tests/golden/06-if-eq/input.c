int main() {
    int j;
    j = 0;
    if (j == 0) {
        j = 4;
    } else {
        j = 9;
    }
    return j;
}
