from keras.models import Sequential
from keras.layers import Dense
model = Sequential([Dense(2)])
