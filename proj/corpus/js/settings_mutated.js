function createPlaylist(user, title) {
  var options = {url: 'https://api.spotify.com/v1/users/' + user + '/playlists'};
  options.type = 'POST';
  options.data = {name: title, public: false};
  $.ajax(options);
}
